#include <benchmark/benchmark.h>

#include "cmcgraph/continuation.hpp"
#include "cmcgraph/newton.hpp"
#include "cmcgraph/operator.hpp"

namespace {

struct Problem {
    cmc::PolarGrid grid;
    cmc::DerivativeStencils stencils;
    cmc::RightHandSide rhs;
    cmc::BoundaryValues phi;
    cmc::ScalarField u0;

    explicit Problem(int n_theta)
        : grid(cmc::CapDomain::from_boundary_radius({0.0, 0.0, 1.0}, 0.8), n_theta, 2 * n_theta),
          stencils(grid),
          rhs(cmc::ScalarField(grid, 1.0), cmc::ScalarField(grid, 0.0)),
          phi(grid, 0.0),
          u0(grid, 0.0) {
        rhs.family = cmc::RhsFamily::Target;
        rhs.t = 1.0;
        rhs.C = 2.0;
        rhs.eps = 0.2;
        rhs.H_target = 0.5;
    }
};

void BM_JacobianAssembly(benchmark::State& state) {
    Problem p(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        cmc::DiscreteOperator op = cmc::linearize(p.stencils, p.u0, p.rhs);
        benchmark::DoNotOptimize(op.jacobian.nonZeros());
    }
}
BENCHMARK(BM_JacobianAssembly)->Arg(32)->Arg(64);

void BM_SparseFactorSolve(benchmark::State& state) {
    Problem p(static_cast<int>(state.range(0)));
    cmc::DiscreteOperator op = cmc::linearize(p.stencils, p.u0, p.rhs);
    Eigen::VectorXd r = Eigen::VectorXd::Ones(op.jacobian.rows());
    for (auto _ : state) {
        Eigen::VectorXd delta = cmc::linear_solve(op.jacobian, r);
        benchmark::DoNotOptimize(delta.sum());
    }
}
BENCHMARK(BM_SparseFactorSolve)->Arg(32)->Arg(64);

void BM_NewtonSolve(benchmark::State& state) {
    Problem p(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        cmc::SolveOutcome out = cmc::newton_solve(p.stencils, p.rhs, p.phi, p.u0);
        benchmark::DoNotOptimize(out.final_residual);
    }
}
BENCHMARK(BM_NewtonSolve)->Arg(24)->Arg(48);

}  // namespace
