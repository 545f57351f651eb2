#include <benchmark/benchmark.h>

#include "cmcgraph/operator.hpp"
#include "cmcgraph/oracles.hpp"

namespace {

cmc::PolarGrid make_grid(int n_theta) {
    return cmc::PolarGrid(cmc::CapDomain::from_boundary_radius({0.0, 0.0, 1.0}, 0.8), n_theta,
                          2 * n_theta);
}

void BM_StencilBuild(benchmark::State& state) {
    cmc::PolarGrid grid = make_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        cmc::DerivativeStencils st(grid);
        benchmark::DoNotOptimize(st.row(0).h11.size());
    }
    state.SetItemsProcessed(state.iterations() * grid.node_count());
}
BENCHMARK(BM_StencilBuild)->Arg(32)->Arg(64);

void BM_ApplyQ(benchmark::State& state) {
    cmc::PolarGrid grid = make_grid(static_cast<int>(state.range(0)));
    cmc::DerivativeStencils st(grid);
    cmc::ScalarField u = cmc::cap_solution({-0.4, cmc::cap_pair_radius(0.8, 0.4)},
                                           cmc::SphereBranch::Far, grid);
    for (auto _ : state) {
        cmc::ScalarField q = cmc::apply_Q(st, u);
        benchmark::DoNotOptimize(q[0]);
    }
    state.SetItemsProcessed(state.iterations() * grid.node_count());
}
BENCHMARK(BM_ApplyQ)->Arg(32)->Arg(64)->Arg(128);

void BM_GraphGeometry(benchmark::State& state) {
    cmc::PolarGrid grid = make_grid(static_cast<int>(state.range(0)));
    cmc::DerivativeStencils st(grid);
    cmc::ScalarField u = cmc::cap_solution({-0.4, cmc::cap_pair_radius(0.8, 0.4)},
                                           cmc::SphereBranch::Far, grid);
    for (auto _ : state) {
        cmc::RadialGraphGeometry geo = cmc::graph_geometry(st, u);
        benchmark::DoNotOptimize(geo.mean_curvature[0]);
    }
    state.SetItemsProcessed(state.iterations() * grid.node_count());
}
BENCHMARK(BM_GraphGeometry)->Arg(32)->Arg(64);

void BM_CapOracle(benchmark::State& state) {
    cmc::PolarGrid grid = make_grid(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        cmc::ScalarField u = cmc::cap_solution({-0.4, cmc::cap_pair_radius(0.8, 0.4)},
                                               cmc::SphereBranch::Far, grid);
        benchmark::DoNotOptimize(u[0]);
    }
}
BENCHMARK(BM_CapOracle)->Arg(64)->Arg(128);

}  // namespace
