#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/newton.hpp"
#include "cmcgraph/operator.hpp"
#include "cmcgraph/oracles.hpp"
#include "fields.hpp"

using namespace cmc;

TEST_CASE("linear_solve: identity system") {
    Eigen::SparseMatrix<double> eye(5, 5);
    eye.setIdentity();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(5);
    r[0] = 1.0;
    Eigen::VectorXd x = linear_solve(eye, r);
    CHECK(x[0] == doctest::Approx(-1.0).epsilon(1e-15));
    for (int i = 1; i < 5; ++i) CHECK(x[i] == 0.0);
}

TEST_CASE("linear_solve: tridiagonal system against a dense factorization") {
    const int n = 120;
    Eigen::SparseMatrix<double> lap(n, n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < n; ++i) {
        trip.emplace_back(i, i, 2.0);
        dense(i, i) = 2.0;
        if (i > 0) {
            trip.emplace_back(i, i - 1, -1.0);
            dense(i, i - 1) = -1.0;
        }
        if (i + 1 < n) {
            trip.emplace_back(i, i + 1, -1.0);
            dense(i, i + 1) = -1.0;
        }
    }
    lap.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = std::sin(0.3 * i) + 0.2;
    Eigen::VectorXd sparse_x = linear_solve(lap, r);
    Eigen::VectorXd dense_x = dense.partialPivLu().solve(-r);
    CHECK((sparse_x - dense_x).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("linear_solve: structurally singular matrix is reported") {
    Eigen::SparseMatrix<double> bad(4, 4);
    std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}};
    bad.setFromTriplets(trip.begin(), trip.end());  // row 3 empty
    Eigen::VectorXd r = Eigen::VectorXd::Ones(4);
    CHECK_THROWS_AS(linear_solve(bad, r), SingularSystemError);

    Eigen::SparseMatrix<double> rank1(2, 2);
    std::vector<Eigen::Triplet<double>> t2{{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}};
    rank1.setFromTriplets(t2.begin(), t2.end());
    CHECK_THROWS_AS(linear_solve(rank1, Eigen::VectorXd::Ones(2)), SingularSystemError);
}

namespace {

RightHandSide unit_subsolution_rhs(const PolarGrid& grid, double C, double eps, double H) {
    RightHandSide rhs(ScalarField(grid, 1.0), ScalarField(grid, 0.0));
    rhs.C = C;
    rhs.eps = eps;
    rhs.H_target = H;
    return rhs;
}

}  // namespace

TEST_CASE("newton at t = 0 accepts the subsolution immediately") {
    PolarGrid grid = test::demo_cap(16, 16);
    RightHandSide rhs = unit_subsolution_rhs(grid, 4.0, 0.2, 0.7).with(RhsFamily::Subsolution, 0.0);
    BoundaryValues phi(grid, 0.0);
    ScalarField u0(grid, 0.0);

    SolveOutcome out = newton_solve(rhs, phi, u0);
    CHECK(out.converged);
    CHECK(out.iterations <= 2);
    CHECK(out.final_residual <= 1e-10);
    CHECK(phi.matches(out.u));
    CHECK(out.ordering.min_margin == 0.0);
}

TEST_CASE("newton rejects a start iterate that violates the boundary data") {
    PolarGrid grid = test::demo_cap(16, 16);
    RightHandSide rhs = unit_subsolution_rhs(grid, 4.0, 0.2, 0.7).with(RhsFamily::Subsolution, 0.0);
    BoundaryValues phi(grid, 0.0);
    ScalarField u0(grid, 1e-14);  // off by one ulp-scale constant
    CHECK_THROWS_AS(newton_solve(rhs, phi, u0), std::invalid_argument);
}

TEST_CASE("newton solves the constant-curvature endpoint to the cap oracle") {
    PolarGrid grid = test::demo_cap(48, 96);
    double R = cap_pair_radius(0.8, 0.4);
    RightHandSide rhs = unit_subsolution_rhs(grid, 32.0, 0.219, 1.0 / R).with(RhsFamily::Target, 1.0);
    BoundaryValues phi(grid, 0.0);
    ScalarField u0(grid, 0.0);

    SolveOutcome out = newton_solve(rhs, phi, u0);
    CHECK(out.converged);
    CHECK(out.final_residual <= 1e-10);

    ScalarField oracle = cap_solution({-0.4, R}, SphereBranch::Far, grid);
    double worst = 0.0;
    for (int p = 0; p < grid.node_count(); ++p)
        worst = std::max(worst, std::abs(out.u[p] - oracle[p]));
    CHECK(worst < 1e-2);

    // residual decreases across accepted steps
    for (size_t k = 1; k < out.history.size(); ++k)
        CHECK(out.history[k].residual_norm < out.history[k - 1].residual_norm);

    // discrete ordering against the unit-sphere subsolution
    CHECK(out.ordering.min_margin >= 0.0);
    CHECK(out.ordering.min_margin_interior > 0.0);
    CHECK(out.ordering.max_boundary_normal_derivative < 0.0);
}

TEST_CASE("newton outcomes are bit-identical across runs") {
    PolarGrid grid = test::demo_cap(20, 24);
    RightHandSide rhs = unit_subsolution_rhs(grid, 8.0, 0.3, 0.6).with(RhsFamily::Target, 1.0);
    BoundaryValues phi(grid, 0.0);
    ScalarField u0(grid, 0.0);

    SolveOutcome a = newton_solve(rhs, phi, u0);
    SolveOutcome b = newton_solve(rhs, phi, u0);
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(a.iterations == b.iterations);
    for (int p = 0; p < grid.node_count(); ++p) CHECK(a.u[p] == b.u[p]);
}

TEST_CASE("solved fields refine at second order") {
    BoundaryValues* unused = nullptr;
    (void)unused;
    auto solve_on = [](int n) {
        PolarGrid grid = test::demo_cap(n, n);
        RightHandSide rhs =
            unit_subsolution_rhs(grid, 8.0, 0.3, 0.7).with(RhsFamily::Target, 1.0);
        BoundaryValues phi(grid, 0.0);
        SolveOutcome out = newton_solve(rhs, phi, ScalarField(grid, 0.0));
        REQUIRE(out.converged);
        return out.u;
    };
    ScalarField u16 = solve_on(16);
    ScalarField u32 = solve_on(32);
    ScalarField u64 = solve_on(64);

    double e1 = (u16 - restrict_to_coarse(u32, u16.grid())).max_norm();
    double e2 = (u32 - restrict_to_coarse(u64, u32.grid())).max_norm();
    double ratio = e1 / e2;
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("max-iteration and line-search failures carry the last iterate") {
    PolarGrid grid = test::demo_cap(12, 16);
    RightHandSide rhs = unit_subsolution_rhs(grid, 8.0, 0.3, 0.7).with(RhsFamily::Target, 1.0);
    BoundaryValues phi(grid, 0.0);
    SolveConfig cfg;
    cfg.max_newton_iters = 1;
    cfg.residual_tol = 1e-14;

    SolveOutcome out = newton_solve(rhs, phi, ScalarField(grid, 0.0), cfg);
    CHECK_FALSE(out.converged);
    CHECK(out.status == SolveStatus::MaxItersExceeded);
    CHECK(out.u.all_finite());
    CHECK(out.history.size() >= 2);  // start plus one accepted step
}
