#include <doctest.h>

#include <cmath>
#include <random>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/geometry.hpp"
#include "fields.hpp"

using namespace cmc;

TEST_CASE("cap domain validates its invariants") {
    CHECK_THROWS_AS(CapDomain({0.0, 0.0, 2.0}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(CapDomain({0.0, 0.0, 1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CapDomain({0.0, 0.0, 1.0}, M_PI / 2.0), std::invalid_argument);

    CapDomain cap = CapDomain::from_boundary_radius({0.0, 0.0, 1.0}, 0.8);
    CHECK(cap.theta_max() == doctest::Approx(std::asin(0.8)).epsilon(1e-15));
    CHECK(cap.boundary_mean_curvature() > 0.0);
}

TEST_CASE("polar grid layout") {
    PolarGrid grid = test::quarter_cap(8, 12);
    CHECK(grid.node_count() == 1 + 8 * 12);
    CHECK(grid.interior_count() == 1 + 7 * 12);
    CHECK(grid.is_pole(0));
    CHECK(grid.node(3, 12) == grid.node(3, 0));    // periodic wrap
    CHECK(grid.node(3, -1) == grid.node(3, 11));
    CHECK(grid.ring_of(grid.node(5, 7)) == 5);
    CHECK(grid.azimuth_of(grid.node(5, 7)) == 7);
    for (int j = 0; j < 12; ++j) CHECK(grid.is_boundary(grid.node(8, j)));
    CHECK_FALSE(grid.is_boundary(grid.node(7, 0)));

    CHECK_THROWS_AS(PolarGrid(grid.domain(), 8, 7), std::invalid_argument);  // odd
    CHECK_THROWS_AS(PolarGrid(grid.domain(), 8, 6), std::invalid_argument);  // < 8
}

TEST_CASE("distance to boundary is theta_max - theta") {
    CapDomain cap({0.0, 0.0, 1.0}, M_PI / 3.0);
    PolarGrid grid(cap, 8, 16);
    ScalarField d = distance_to_boundary(grid);

    // theta = pi/6 is ring 4 of 8 on a pi/3 cap
    CHECK(d[grid.node(4, 3)] == doctest::Approx(M_PI / 6.0).epsilon(1e-15));
    for (int j = 0; j < grid.n_phi(); ++j) CHECK(d[grid.node(8, j)] == 0.0);

    CapDomain small({0.0, 0.0, 1.0}, M_PI / 4.0);
    CHECK(distance_to_boundary(PolarGrid(small, 8, 16))[0] ==
          doctest::Approx(M_PI / 4.0).epsilon(1e-15));

    // affine in theta with slope -1, ring-wise
    for (int i = 1; i <= grid.n_theta(); ++i) {
        double expected = d[0] - grid.theta(grid.node(i, 0));
        CHECK(d[grid.node(i, 0)] == doctest::Approx(expected).epsilon(1e-13));
    }
}

namespace {

// Curvature of the parallel circle from the first variation of its length:
// kappa = -L'(eps) / L(eps), differentiated to fourth order.
double circumference_curvature(const CapDomain& cap, double eps) {
    auto len = [&](double e) { return 2.0 * M_PI * std::sin(cap.theta_max() - e); };
    const double h = 1e-4;
    double deriv =
        (-len(eps + 2 * h) + 8 * len(eps + h) - 8 * len(eps - h) + len(eps - 2 * h)) / (12 * h);
    return -deriv / len(eps);
}

}  // namespace

TEST_CASE("parallel circle mean curvature matches the circumference oracle") {
    CapDomain cap({0.0, 0.0, 1.0}, M_PI / 4.0);
    CHECK(parallel_mean_curvature(cap, 0.0) == doctest::Approx(1.0).epsilon(1e-14));

    CapDomain third({0.0, 0.0, 1.0}, M_PI / 3.0);
    CHECK(parallel_mean_curvature(third, 0.0) ==
          doctest::Approx(1.0 / std::tan(M_PI / 3.0)).epsilon(1e-14));

    for (double theta_max : {0.3, 0.5, M_PI / 4.0, 1.0, 1.4}) {
        CapDomain c({0.0, 0.0, 1.0}, theta_max);
        for (int k = 0; k < 20; ++k) {
            double eps = 0.9 * theta_max * k / 19.0;
            CHECK(parallel_mean_curvature(c, eps) ==
                  doctest::Approx(circumference_curvature(c, eps)).epsilon(1e-9));
        }
    }
}

TEST_CASE("parallel circle curvature does not decrease with distance") {
    for (double theta_max : {0.3, 0.7, 1.2}) {
        CapDomain cap({0.0, 0.0, 1.0}, theta_max);
        double prev = parallel_mean_curvature(cap, 0.0);
        CHECK(prev == doctest::Approx(cap.boundary_mean_curvature()));
        for (int k = 1; k < 100; ++k) {
            double eps = 0.98 * theta_max * k / 99.0;
            double h = parallel_mean_curvature(cap, eps);
            CHECK(h >= prev);
            prev = h;
        }
    }
    CapDomain cap({0.0, 0.0, 1.0}, M_PI / 4.0);
    CHECK_THROWS_AS(parallel_mean_curvature(cap, M_PI / 4.0), HypothesisError);
}

TEST_CASE("laplacian of the distance function") {
    CapDomain quarter({0.0, 0.0, 1.0}, M_PI / 4.0);
    CHECK(laplacian_distance(quarter, 0.0) == doctest::Approx(-1.0).epsilon(1e-14));

    CapDomain nearly({0.0, 0.0, 1.0}, M_PI / 2.0 - 1e-6);
    CHECK(laplacian_distance(nearly, 0.0) == doctest::Approx(-1e-6).epsilon(1e-6));

    CapDomain third({0.0, 0.0, 1.0}, M_PI / 3.0);
    CHECK(laplacian_distance(third, M_PI / 6.0) ==
          doctest::Approx(-1.0 / std::tan(M_PI / 6.0)).epsilon(1e-14));
}

TEST_CASE("embed places nodes on the sphere of radius rho") {
    PolarGrid grid(CapDomain({0.0, 0.0, 1.0}, M_PI / 2.0 - 1e-9), 8, 16);
    Vec3 pole = embed(grid, 0, 1.0);
    CHECK(pole.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(pole.z == doctest::Approx(1.0).epsilon(1e-15));

    // theta = pi/2 (to rounding), phi = 0, rho = 2 -> (2, 0, 0)
    Vec3 equator = embed(grid, grid.node(8, 0), 2.0);
    CHECK(equator.x == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(std::abs(equator.y) < 1e-12);
    CHECK(std::abs(equator.z) < 1e-7);

    // theta = pi/4 (to rounding), phi = pi/2 -> (0, sqrt2/2, sqrt2/2)
    Vec3 mid = embed(grid, grid.node(4, 4), 1.0);
    CHECK(mid.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(mid.y == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-8));
    CHECK(mid.z == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-8));

    CHECK_THROWS_AS(embed(grid, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(embed(grid, 0, -1.0), std::invalid_argument);
}

TEST_CASE("embed preserves the norm for random nodes and radii") {
    PolarGrid grid = test::demo_cap(16, 16);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> nodes(0, grid.node_count() - 1);
    std::uniform_real_distribution<double> radii(0.1, 10.0);
    for (int k = 0; k < 200; ++k) {
        double rho = radii(rng);
        CHECK(embed(grid, nodes(rng), rho).norm() == doctest::Approx(rho).epsilon(1e-14));
    }
}

TEST_CASE("off-axis domains keep the same polar structure") {
    Vec3 axis = Vec3{1.0, 2.0, -0.5}.normalized();
    CapDomain cap(axis, 0.9);
    PolarGrid grid(cap, 8, 16);
    for (int p = 0; p < grid.node_count(); ++p) {
        Vec3 q = grid.unit_point(p);
        CHECK(q.norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(dot(q, axis) == doctest::Approx(std::cos(grid.theta(p))).epsilon(1e-13));
    }
}

TEST_CASE("field restriction pulls back the refined grid exactly") {
    PolarGrid coarse = test::quarter_cap(8, 12);
    PolarGrid fine = coarse.refined();
    ScalarField uf = test::random_nodal_field(fine, 3);
    ScalarField uc = restrict_to_coarse(uf, coarse);
    CHECK(uc[0] == uf[0]);
    for (int i = 1; i <= 8; ++i)
        for (int j = 0; j < 12; ++j) CHECK(uc[coarse.node(i, j)] == uf[fine.node(2 * i, 2 * j)]);
}
