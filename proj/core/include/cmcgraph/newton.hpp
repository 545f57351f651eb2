#ifndef CMCGRAPH_NEWTON_HPP
#define CMCGRAPH_NEWTON_HPP

#include <Eigen/Sparse>
#include <vector>

#include "cmcgraph/geometry.hpp"
#include "cmcgraph/operator.hpp"
#include "cmcgraph/rhs.hpp"

namespace cmc {

struct SolveConfig {
    double residual_tol = 1e-10;  // max-norm stopping criterion
    int max_newton_iters = 50;
    double armijo_slope = 1e-4;          // sufficient-decrease fraction per unit step
    double min_step = 9.5367431640625e-7;  // 2^-20 backtracking floor
    bool log_iterations = false;         // print one line per Newton iterate
};

enum class SolveStatus { Converged, LinearSolveSingular, LineSearchFailed, MaxItersExceeded };

const char* to_string(SolveStatus s);

struct IterationRecord {
    int iter;
    double residual_norm;
    double step;
};

/// Order diagnostics of the iterate against the subsolution: the discrete
/// counterparts of u <= ubar in the interior and inward-normal separation
/// at the boundary.
struct OrderingDiagnostics {
    double min_margin;                      // min over all nodes of (ubar - u)
    double min_margin_interior;             // min over pole + interior rings
    double max_boundary_normal_derivative;  // max over boundary of d_nu(u - ubar)
};

OrderingDiagnostics ordering_diagnostics(const ScalarField& u, const ScalarField& ubar);

struct SolveOutcome {
    ScalarField u;  // converged solution, or the last iterate on failure
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    SolveStatus status = SolveStatus::Converged;
    std::vector<IterationRecord> history;
    OrderingDiagnostics ordering{0.0, 0.0, 0.0};
};

/// Damped Newton iteration on the discrete Dirichlet residual Q[u] - rhs(u)
/// with boundary rows pinned to phi. u0 must carry phi on the boundary ring
/// bit-exactly (throws std::invalid_argument otherwise).
SolveOutcome newton_solve(const RightHandSide& rhs, const BoundaryValues& phi,
                          const ScalarField& u0, const SolveConfig& cfg = {});
SolveOutcome newton_solve(const DerivativeStencils& stencils, const RightHandSide& rhs,
                          const BoundaryValues& phi, const ScalarField& u0,
                          const SolveConfig& cfg = {});

/// Sparse LU with symbolic-pattern reuse across solves on a fixed grid.
/// solve() returns delta with J delta = -r; one step of iterative refinement
/// is applied if the backward error misses 1e-12. Throws SingularSystemError
/// on factorization failure or when the 1-norm condition estimate tops 1e14.
class LinearSolver {
  public:
    Eigen::VectorXd solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r);

    double last_backward_error() const { return backward_error_; }
    double last_condition_estimate() const { return condition_estimate_; }

  private:
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
    bool analyzed_ = false;
    int pattern_rows_ = -1;
    double backward_error_ = 0.0;
    double condition_estimate_ = 0.0;
};

/// One-shot convenience wrapper around LinearSolver.
Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r);

}  // namespace cmc

#endif
