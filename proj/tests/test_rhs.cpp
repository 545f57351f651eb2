#include <doctest.h>

#include <cmath>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/rhs.hpp"
#include "fields.hpp"

using namespace cmc;

namespace {

RightHandSide basic_rhs(const PolarGrid& grid, double H_bar, double ubar, double C, double eps,
                        double H_target) {
    RightHandSide rhs(ScalarField(grid, H_bar), ScalarField(grid, ubar));
    rhs.C = C;
    rhs.eps = eps;
    rhs.H_target = H_target;
    return rhs;
}

}  // namespace

TEST_CASE("eps formula: half the slack in the curvature gap") {
    PolarGrid grid = test::quarter_cap(8, 8);

    // unit-sphere subsolution: H_bar = 1, ell = 1
    ScalarField ubar0(grid, 0.0);
    ScalarField hbar1(grid, 1.0);
    CHECK(eps_for_constant(ubar0, hbar1, 0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(eps_for_constant(ubar0, hbar1, 0.5, 64.0) == doctest::Approx(0.5).epsilon(1e-15));

    // doubled sphere: H_bar = 1/2, ell = 2; at C = 2: 0.5 * 4 * (1 - 0.5) = 1
    ScalarField ubar2(grid, std::log(2.0));
    ScalarField hbar2(grid, 0.5);
    CHECK(eps_for_constant(ubar2, hbar2, 0.25, 2.0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(eps_for_constant(ubar0, hbar1, 1.0, 2.0), HypothesisError);
    CHECK_THROWS_AS(eps_for_constant(ubar0, hbar1, 1.5, 2.0), HypothesisError);
    CHECK_THROWS_AS(eps_for_constant(ubar0, hbar1, 0.0, 2.0), HypothesisError);
    CHECK_THROWS_AS(eps_for_constant(ubar0, hbar1, -0.5, 2.0), HypothesisError);
}

TEST_CASE("select_constants returns a passing doubling exponent") {
    PolarGrid grid = test::quarter_cap(8, 8);
    ScalarField ubar(grid, 0.0);
    ScalarField hbar(grid, 1.0);

    ConstantSelection sel = select_constants(ubar, hbar, 0.5);
    CHECK(sel.C >= 2.0);
    CHECK(sel.eps == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sel.reports.size() == 10);
    for (const RhoMonotonicityReport& rep : sel.reports) CHECK(rep.pass);

    CHECK_THROWS_AS(select_constants(ubar, hbar, 1.0), HypothesisError);
}

TEST_CASE("rhs values: subsolution family starts at the subsolution curvature") {
    PolarGrid grid = test::quarter_cap(8, 8);
    RightHandSide rhs = basic_rhs(grid, 1.0, 0.0, 4.0, 0.5, 0.5).with(RhsFamily::Subsolution, 0.0);
    ScalarField u(grid, 0.0);
    ScalarField v = eval_rhs(rhs, u);
    for (int p = 0; p < v.size(); ++p) CHECK(v[p] == -2.0);  // -n H_bar exactly for ubar = 0

    // nonconstant subsolution: still -n H_bar at u = ubar, up to exp round-off
    ScalarField ubar = test::smooth_field(grid, 3, 0.2);
    RightHandSide rhs2(ScalarField(grid, 0.9), ubar);
    rhs2.C = 8.0;
    rhs2.eps = 0.3;
    rhs2.H_target = 0.5;
    ScalarField v2 = eval_rhs(rhs2.with(RhsFamily::Subsolution, 0.0), ubar);
    for (int p = 0; p < v2.size(); ++p) CHECK(v2[p] == doctest::Approx(-1.8).epsilon(1e-13));
}

TEST_CASE("rhs values: hand-off is bit-identical and the target endpoint is constant") {
    PolarGrid grid = test::quarter_cap(8, 8);
    RightHandSide proto = basic_rhs(grid, 1.0, 0.0, 4.0, 0.37, 0.62);
    ScalarField u = test::random_nodal_field(grid, 5, 0.6);

    ScalarField sub_end = eval_rhs(proto.with(RhsFamily::Subsolution, 1.0), u);
    ScalarField tgt_begin = eval_rhs(proto.with(RhsFamily::Target, 0.0), u);
    for (int p = 0; p < u.size(); ++p) CHECK(sub_end[p] == tgt_begin[p]);  // exact

    ScalarField tgt_end = eval_rhs(proto.with(RhsFamily::Target, 1.0), u);
    for (int p = 0; p < u.size(); ++p) CHECK(tgt_end[p] == -2.0 * 0.62);
}

TEST_CASE("rhs values stay non-positive across t and u") {
    PolarGrid grid = test::quarter_cap(8, 8);
    RightHandSide proto = basic_rhs(grid, 1.0, 0.0, 4.0, 0.5, 0.7);
    for (unsigned seed : {1u, 2u}) {
        ScalarField u = test::random_nodal_field(grid, seed, 1.5);
        for (RhsFamily family : {RhsFamily::Subsolution, RhsFamily::Target}) {
            for (double t : {0.0, 0.2, 0.5, 0.8, 1.0}) {
                ScalarField v = eval_rhs(proto.with(family, t), u);
                for (int p = 0; p < v.size(); ++p) CHECK(v[p] <= 0.0);
            }
        }
    }
}

TEST_CASE("rhs is affine in t: midpoint identity") {
    PolarGrid grid = test::quarter_cap(8, 8);
    RightHandSide proto = basic_rhs(grid, 0.8, -0.1, 8.0, 0.4, 0.3);
    ScalarField u = test::random_nodal_field(grid, 9, 0.4);
    for (RhsFamily family : {RhsFamily::Subsolution, RhsFamily::Target}) {
        for (auto [t1, t2] : {std::pair{0.0, 1.0}, std::pair{0.2, 0.7}}) {
            ScalarField a = eval_rhs(proto.with(family, t1), u);
            ScalarField b = eval_rhs(proto.with(family, t2), u);
            ScalarField mid = eval_rhs(proto.with(family, 0.5 * (t1 + t2)), u);
            for (int p = 0; p < u.size(); ++p)
                CHECK(mid[p] == doctest::Approx(0.5 * (a[p] + b[p])).epsilon(1e-14));
        }
    }
}

TEST_CASE("radial monotonicity check across the families") {
    PolarGrid grid = test::quarter_cap(8, 8);
    ScalarField ubar(grid, 0.0);
    RightHandSide proto = basic_rhs(grid, 1.0, 0.0, 2.0, 0.5, 0.5);

    // subsolution family with C = 2: every factor positive at all t
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        RhoMonotonicityReport rep = monotone_rho_check(proto.with(RhsFamily::Subsolution, t), ubar);
        CHECK(rep.applicable);
        CHECK(rep.pass);
        CHECK(rep.min_derivative > 0.0);
    }

    // target family at t = 0 with rho = rho_bar = 1: derivative is (C-1) eps
    RhoMonotonicityReport t0 = monotone_rho_check(proto.with(RhsFamily::Target, 0.0), ubar);
    CHECK(t0.min_derivative == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(t0.pass);

    // target family at t = 1: derivative is -n H, waived
    RhoMonotonicityReport t1 = monotone_rho_check(proto.with(RhsFamily::Target, 1.0), ubar);
    CHECK_FALSE(t1.applicable);
    CHECK(t1.pass);
    CHECK(t1.min_derivative == doctest::Approx(-2.0 * 0.5).epsilon(1e-14));
}
