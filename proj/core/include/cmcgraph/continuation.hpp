#ifndef CMCGRAPH_CONTINUATION_HPP
#define CMCGRAPH_CONTINUATION_HPP

#include <vector>

#include "cmcgraph/barriers.hpp"
#include "cmcgraph/geometry.hpp"
#include "cmcgraph/newton.hpp"
#include "cmcgraph/rhs.hpp"

namespace cmc {

/// The two-stage homotopy: stage one walks the subsolution family from the
/// known solution at t = 0 to the hand-off right-hand side, stage two walks
/// the target family from the hand-off to the constant target curvature.
enum class Stage { Subsolution, Target };

const char* to_string(Stage stage);

RhsFamily family_of(Stage stage);

struct ContinuationPlan {
    double t_step_init = 0.1;
    double t_step_min = 1e-4;
    double t_step_max = 0.25;
    double growth = 1.5;        // applied after grow_after consecutive successes
    int grow_after = 3;
    SolveConfig solve;
};

struct TraceRow {
    Stage stage;
    double t;
    int iterations;
    double residual;
    double min_margin;                  // min (ubar - u) over all nodes
    double min_margin_interior;         // min over pole + interior rings
    double boundary_normal_derivative;  // max over boundary of d_nu(u - ubar)
};

struct ContinuationTrace {
    std::vector<TraceRow> rows;
};

enum class StageStatus { Completed, StepUnderflow, BadStart };

struct StageResult {
    ScalarField u;  // t = 1 solution on success, last accepted iterate otherwise
    ContinuationTrace trace;
    StageStatus status = StageStatus::Completed;
    double t_reached = 0.0;
};

/// Walks one family from t = 0 (where u_start must already solve the problem
/// within the solver tolerance) to t = 1 with adaptive steps: halve on solver
/// failure, grow after consecutive successes, warm-start from the previous
/// solution.
StageResult run_stage(Stage stage, const RightHandSide& rhs_template,
                      const BoundaryValues& phi, const ScalarField& u_start,
                      const ContinuationPlan& plan);

struct PipelineConfig {
    ContinuationPlan plan;
    double barrier_eps_strip = 0.0;  // 0 picks theta_max / 5
    bool run_barriers = true;
    double C_override = 0.0;    // 0 keeps the searched constant
    double eps_override = 0.0;  // 0 keeps the derived constant
};

enum class PipelineStatus { Ok, StageOneFailed, StageTwoFailed };

struct CmcSolution {
    ScalarField u;
    ContinuationTrace trace;
    ConstantSelection constants;
    BarrierCertificate height_certificate;
    BarrierCertificate gradient_certificate;
    EnclosureReport enclosure;
    PipelineStatus status = PipelineStatus::Ok;
    StageStatus failed_stage_status = StageStatus::Completed;
    double final_residual = 0.0;
};

/// Full pipeline: checks the subsolution, selects the homotopy constants,
/// runs both stages, and certifies the barriers on the converged solution.
/// Throws HypothesisError when the subsolution hypotheses fail; stage
/// failures are reported through status with the partial trace attached.
CmcSolution solve_cmc(const PolarGrid& grid, const BoundaryValues& phi, const ScalarField& ubar,
                      double H_target, const PipelineConfig& config = {});

}  // namespace cmc

#endif
