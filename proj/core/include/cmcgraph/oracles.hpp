#ifndef CMCGRAPH_ORACLES_HPP
#define CMCGRAPH_ORACLES_HPP

#include <vector>

#include "cmcgraph/geometry.hpp"

namespace cmc {

/// Sphere of the given radius centered at center_offset * axis; its radial
/// graphs over the cap are the closed-form solutions used as ground truth.
struct OffsetSphere {
    double center_offset = 0.0;
    double radius = 1.0;
};

/// Which intersection of the ray with the sphere: rho = a cos(theta) +/- sqrt(...).
enum class SphereBranch { Near, Far };

/// u(theta) = log(a cos(theta) +- sqrt(R^2 - a^2 sin^2 theta)), axisymmetric.
/// Throws when the discriminant or rho fails to stay positive on the grid.
ScalarField cap_solution(const OffsetSphere& sphere, SphereBranch branch, const PolarGrid& grid);

/// Two distinct spherical-cap graphs spanning the boundary circle of radius r
/// with the same positive mean curvature 1/radius: the inner one (u <= 0,
/// sphere center dropped by h below the origin) and the outer one (u >= 0,
/// the mirror sphere across the boundary plane). Their coexistence exhibits
/// non-uniqueness of the Dirichlet problem for positive target curvature.
struct CapPair {
    ScalarField inner;      // u <= 0, boundary trace 0
    ScalarField outer;      // u >= 0, boundary trace 0
    double radius;          // common sphere radius
    double mean_curvature;  // 1 / radius
};

/// Common sphere radius sqrt(1 + h^2 + 2 h sqrt(1 - r^2)).
double cap_pair_radius(double r, double h);

/// Largest admissible center drop (2 r^2 - 1) / sqrt(1 - r^2).
double cap_pair_max_offset(double r);

/// Builds the pair on a grid with theta_max = asin(r). Requires
/// 1/sqrt(2) <= r < 1 and 0 <= h <= cap_pair_max_offset(r).
CapPair cap_pair(double r, double h, const PolarGrid& grid);

/// Residual of the axisymmetric reduction of the graph curvature equation
/// against a constant target H, evaluated on a meridian profile
/// u_i = u(i * theta_max / (profile.size()-1)) with fourth-order differences
/// (even reflection through the pole). H = 0 gives the bare operator values.
std::vector<double> axisymmetric_ode_residual(const std::vector<double>& profile,
                                              double theta_max, double H);

}  // namespace cmc

#endif
