#include "cmcgraph/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/operator.hpp"

namespace cmc {

const char* to_string(Stage stage) {
    return stage == Stage::Subsolution ? "subsolution" : "target";
}

RhsFamily family_of(Stage stage) {
    return stage == Stage::Subsolution ? RhsFamily::Subsolution : RhsFamily::Target;
}

namespace {

TraceRow make_row(Stage stage, double t, int iterations, double res, const ScalarField& u,
                  const ScalarField& ubar) {
    OrderingDiagnostics d = ordering_diagnostics(u, ubar);
    return {stage,        t,
            iterations,   res,
            d.min_margin, d.min_margin_interior,
            d.max_boundary_normal_derivative};
}

}  // namespace

StageResult run_stage(Stage stage, const RightHandSide& rhs_template, const BoundaryValues& phi,
                      const ScalarField& u_start, const ContinuationPlan& plan) {
    if (!(plan.t_step_min > 0.0) || plan.t_step_min > plan.t_step_init || plan.t_step_init > 1.0)
        throw std::invalid_argument("continuation steps must satisfy 0 < t_step_min <= t_step_init <= 1");

    const RhsFamily family = family_of(stage);
    DerivativeStencils stencils(u_start.grid());

    StageResult result{u_start, {}, StageStatus::Completed, 0.0};

    double r0 = residual(stencils, u_start, rhs_template.with(family, 0.0)).max_norm();
    result.trace.rows.push_back(make_row(stage, 0.0, 0, r0, u_start, rhs_template.ubar));
    if (!(r0 <= plan.solve.residual_tol)) {
        result.status = StageStatus::BadStart;
        return result;
    }

    double t = 0.0;
    double dt = std::min(plan.t_step_init, plan.t_step_max);
    int successes = 0;

    while (t < 1.0) {
        double t_next = std::min(t + dt, 1.0);
        SolveOutcome outcome =
            newton_solve(stencils, rhs_template.with(family, t_next), phi, result.u, plan.solve);
        if (outcome.converged) {
            result.u = outcome.u;
            t = t_next;
            result.t_reached = t;
            result.trace.rows.push_back(make_row(stage, t, outcome.iterations,
                                                 outcome.final_residual, result.u,
                                                 rhs_template.ubar));
            if (++successes >= plan.grow_after) {
                dt = std::min(dt * plan.growth, plan.t_step_max);
                successes = 0;
            }
        } else {
            successes = 0;
            dt *= 0.5;
            if (dt < plan.t_step_min) {
                result.status = StageStatus::StepUnderflow;
                return result;
            }
        }
    }
    return result;
}

CmcSolution solve_cmc(const PolarGrid& grid, const BoundaryValues& phi, const ScalarField& ubar,
                      double H_target, const PipelineConfig& config) {
    if (ubar.grid() != grid) throw std::invalid_argument("subsolution grid mismatch");
    ubar.validate("solve_cmc subsolution");
    if (!(grid.domain().boundary_mean_curvature() > 0.0))
        throw HypothesisError("boundary mean curvature must be positive");

    // The subsolution must carry the boundary data; snap it bit-exactly so the
    // homotopy start iterate satisfies the Dirichlet rows.
    ScalarField ubar_fixed = ubar;
    {
        double worst = 0.0;
        const int nt = grid.n_theta();
        for (int j = 0; j < grid.n_phi(); ++j)
            worst = std::max(worst, std::abs(ubar[grid.node(nt, j)] - phi[j]));
        if (worst > 1e-12)
            throw HypothesisError("subsolution boundary trace differs from the boundary data");
        phi.impose(ubar_fixed);
    }

    DerivativeStencils stencils(grid);
    RadialGraphGeometry bar_geometry = graph_geometry(stencils, ubar_fixed);
    ScalarField H_bar(grid);
    for (int p = 0; p < grid.node_count(); ++p) H_bar[p] = bar_geometry.mean_curvature[p];

    // Discrete subsolution consistency: Q[ubar] + n H_bar = 0 up to round-off.
    {
        ScalarField q = apply_Q(stencils, ubar_fixed);
        double worst = 0.0;
        for (int p = 0; p < grid.node_count(); ++p)
            worst = std::max(worst, std::abs(q[p] + kDim * H_bar[p]));
        if (worst > 1e-8)
            throw HypothesisError("subsolution field is not curvature-consistent on this grid");
    }

    CmcSolution sol{ScalarField(grid), {}, select_constants(ubar_fixed, H_bar, H_target),
                    {},                {}, {},
                    PipelineStatus::Ok, StageStatus::Completed, 0.0};
    if (config.C_override > 0.0) sol.constants.C = config.C_override;
    if (config.eps_override > 0.0) sol.constants.eps = config.eps_override;
    if (config.C_override > 0.0 || config.eps_override > 0.0) {
        // Re-run the structural checks for the overridden constants.
        RightHandSide probe(H_bar, ubar_fixed);
        probe.C = sol.constants.C;
        probe.eps = sol.constants.eps;
        probe.H_target = H_target;
        sol.constants.reports.clear();
        for (RhsFamily family : {RhsFamily::Subsolution, RhsFamily::Target})
            for (double t : {0.0, 0.25, 0.5, 0.75, 1.0})
                sol.constants.reports.push_back(
                    monotone_rho_check(probe.with(family, t), ubar_fixed));
    }

    RightHandSide rhs(H_bar, ubar_fixed);
    rhs.C = sol.constants.C;
    rhs.eps = sol.constants.eps;
    rhs.H_target = H_target;

    StageResult first = run_stage(Stage::Subsolution, rhs, phi, ubar_fixed, config.plan);
    sol.trace.rows = first.trace.rows;
    if (first.status != StageStatus::Completed) {
        sol.status = PipelineStatus::StageOneFailed;
        sol.failed_stage_status = first.status;
        sol.u = first.u;
        return sol;
    }

    StageResult second = run_stage(Stage::Target, rhs, phi, first.u, config.plan);
    sol.trace.rows.insert(sol.trace.rows.end(), second.trace.rows.begin(),
                          second.trace.rows.end());
    sol.u = second.u;
    if (second.status != StageStatus::Completed) {
        sol.status = PipelineStatus::StageTwoFailed;
        sol.failed_stage_status = second.status;
        return sol;
    }
    sol.final_residual = second.trace.rows.back().residual;

    if (config.run_barriers) {
        double strip = config.barrier_eps_strip > 0.0 ? config.barrier_eps_strip
                                                      : grid.domain().theta_max() / 5.0;
        sol.height_certificate = certify_height_barrier(grid, phi);
        sol.gradient_certificate = certify_gradient_barrier(grid, phi, strip);
        sol.enclosure = check_solution_between_barriers(sol.u, sol.height_certificate, ubar_fixed);
    }
    return sol;
}

}  // namespace cmc
