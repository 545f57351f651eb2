#include "cmcgraph/newton.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "cmcgraph/errors.hpp"

namespace cmc {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::LinearSolveSingular: return "linear-solve-singular";
        case SolveStatus::LineSearchFailed: return "line-search-failed";
        case SolveStatus::MaxItersExceeded: return "max-iters-exceeded";
    }
    return "unknown";
}

OrderingDiagnostics ordering_diagnostics(const ScalarField& u, const ScalarField& ubar) {
    const PolarGrid& grid = u.grid();
    if (grid != ubar.grid()) throw std::invalid_argument("fields live on different grids");

    OrderingDiagnostics d;
    d.min_margin = std::numeric_limits<double>::infinity();
    d.min_margin_interior = std::numeric_limits<double>::infinity();
    d.max_boundary_normal_derivative = -std::numeric_limits<double>::infinity();

    for (int p = 0; p < u.size(); ++p) {
        double margin = ubar[p] - u[p];
        d.min_margin = std::min(d.min_margin, margin);
        if (!grid.is_boundary(p)) d.min_margin_interior = std::min(d.min_margin_interior, margin);
    }

    // One-sided inward-normal derivative of (u - ubar) on the boundary ring;
    // nu points toward the pole, i.e. along decreasing theta.
    const int nt = grid.n_theta();
    const double dt = grid.dtheta();
    for (int j = 0; j < grid.n_phi(); ++j) {
        auto diff = [&](int ring) {
            int p = grid.node(ring, j);
            return u[p] - ubar[p];
        };
        double dtheta_g = (3.0 * diff(nt) - 4.0 * diff(nt - 1) + diff(nt - 2)) / (2.0 * dt);
        d.max_boundary_normal_derivative = std::max(d.max_boundary_normal_derivative, -dtheta_g);
    }
    return d;
}

namespace {

double matrix_norm_inf(const Eigen::SparseMatrix<double>& a) {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            row_sums[it.row()] += std::abs(it.value());
    return row_sums.size() ? row_sums.maxCoeff() : 0.0;
}

double matrix_norm_1(const Eigen::SparseMatrix<double>& a) {
    double best = 0.0;
    for (int k = 0; k < a.outerSize(); ++k) {
        double col = 0.0;
        for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
            col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

Eigen::VectorXd LinearSolver::solve(const Eigen::SparseMatrix<double>& J,
                                    const Eigen::VectorXd& r) {
    if (J.rows() != J.cols() || J.rows() != r.size())
        throw std::invalid_argument("linear system dimensions disagree");

    if (!analyzed_ || pattern_rows_ != J.rows()) {
        lu_.analyzePattern(J);
        analyzed_ = true;
        pattern_rows_ = static_cast<int>(J.rows());
    }
    lu_.factorize(J);
    if (lu_.info() != Eigen::Success)
        throw SingularSystemError("sparse LU factorization failed: " + lu_.lastErrorMessage());

    Eigen::VectorXd x = lu_.solve(-r);

    const double norm_J = matrix_norm_inf(J);
    auto backward = [&](const Eigen::VectorXd& sol) {
        double denom = norm_J * sol.lpNorm<Eigen::Infinity>() + r.lpNorm<Eigen::Infinity>();
        if (denom == 0.0) return 0.0;
        return (J * sol + r).lpNorm<Eigen::Infinity>() / denom;
    };
    backward_error_ = backward(x);
    if (backward_error_ > 1e-12) {
        Eigen::VectorXd correction = lu_.solve(-(J * x + r));
        x += correction;
        backward_error_ = backward(x);
        if (!(backward_error_ <= 1e-12))
            throw SingularSystemError("linear solve backward error stalled above 1e-12");
    }

    // Hager/Higham 1-norm estimate of ||J^-1||, a few extra triangular solves.
    {
        const int n = static_cast<int>(J.rows());
        Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / n);
        double estimate = 0.0;
        for (int pass = 0; pass < 5; ++pass) {
            Eigen::VectorXd y = lu_.solve(v);
            estimate = y.lpNorm<1>();
            Eigen::VectorXd xi(n);
            for (int i = 0; i < n; ++i) xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
            Eigen::VectorXd z = lu_.transpose().solve(xi);
            int j;
            double zmax = z.cwiseAbs().maxCoeff(&j);
            if (zmax <= z.dot(v)) break;
            v.setZero();
            v[j] = 1.0;
        }
        condition_estimate_ = matrix_norm_1(J) * estimate;
        if (condition_estimate_ > 1e14)
            throw SingularSystemError("system numerically singular (condition estimate " +
                                      std::to_string(condition_estimate_) + ")");
    }
    return x;
}

Eigen::VectorXd linear_solve(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& r) {
    LinearSolver solver;
    return solver.solve(J, r);
}

SolveOutcome newton_solve(const DerivativeStencils& stencils, const RightHandSide& rhs,
                          const BoundaryValues& phi, const ScalarField& u0,
                          const SolveConfig& cfg) {
    if (cfg.max_newton_iters < 1) throw std::invalid_argument("max_newton_iters must be >= 1");
    if (!(cfg.residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
    u0.validate("newton_solve start");
    if (!phi.matches(u0))
        throw std::invalid_argument("start iterate does not satisfy the boundary condition");

    SolveOutcome out{u0, 0, 0.0, false, SolveStatus::Converged, {}, {0.0, 0.0, 0.0}};
    LinearSolver solver;

    for (int it = 0;; ++it) {
        DiscreteOperator op = linearize(stencils, out.u, rhs);
        double rn = op.residual.max_norm();
        if (it == 0) out.history.push_back({0, rn, 0.0});
        out.final_residual = rn;
        out.iterations = it;
        if (cfg.log_iterations)
            std::printf("newton iter=%d residual=%.6e step=%.6f\n", it,
                        rn, it == 0 ? 0.0 : out.history.back().step);
        if (rn <= cfg.residual_tol) {
            out.converged = true;
            out.status = SolveStatus::Converged;
            break;
        }
        if (it == cfg.max_newton_iters) {
            out.status = SolveStatus::MaxItersExceeded;
            break;
        }

        const int n = static_cast<int>(op.node_of_unknown.size());
        Eigen::VectorXd r(n);
        for (int k = 0; k < n; ++k) r[k] = op.residual[op.node_of_unknown[static_cast<size_t>(k)]];

        Eigen::VectorXd delta;
        try {
            delta = solver.solve(op.jacobian, r);
        } catch (const SingularSystemError&) {
            out.status = SolveStatus::LinearSolveSingular;
            break;
        }

        // Backtracking with sufficient decrease on the residual max-norm.
        double step = 1.0;
        bool accepted = false;
        while (step >= cfg.min_step) {
            ScalarField trial = out.u;
            for (int k = 0; k < n; ++k)
                trial[op.node_of_unknown[static_cast<size_t>(k)]] += step * delta[k];
            double rn_trial = residual(stencils, trial, rhs).max_norm();
            if (std::isfinite(rn_trial) && rn_trial <= (1.0 - cfg.armijo_slope * step) * rn) {
                out.u = trial;
                out.history.push_back({it + 1, rn_trial, step});
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.status = SolveStatus::LineSearchFailed;
            break;
        }
    }

    out.ordering = ordering_diagnostics(out.u, rhs.ubar);
    return out;
}

SolveOutcome newton_solve(const RightHandSide& rhs, const BoundaryValues& phi,
                          const ScalarField& u0, const SolveConfig& cfg) {
    DerivativeStencils stencils(u0.grid());
    return newton_solve(stencils, rhs, phi, u0, cfg);
}

}  // namespace cmc
