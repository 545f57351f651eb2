#include "cmcgraph/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cmcgraph/errors.hpp"

namespace cmc {

Vec3 Vec3::normalized() const {
    double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    return {x / n, y / n, z / n};
}

CapDomain::CapDomain(Vec3 axis, double theta_max) : axis_(axis), theta_max_(theta_max) {
    if (!std::isfinite(theta_max)) throw std::invalid_argument("theta_max must be finite");
    if (std::abs(axis.norm() - 1.0) > 1e-12)
        throw std::invalid_argument("cap axis must be a unit vector (|axis| = 1 within 1e-12)");
    if (!(theta_max > 0.0 && theta_max < M_PI / 2.0))
        throw std::invalid_argument("cap aperture must satisfy 0 < theta_max < pi/2");

    // Right-handed triad: pick the cardinal direction least aligned with the
    // axis, project it onto the tangent plane, complete by a cross product.
    Vec3 candidates[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    int best = 0;
    double best_abs = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 3; ++k) {
        double a = std::abs(dot(candidates[k], axis_));
        if (a < best_abs) {
            best_abs = a;
            best = k;
        }
    }
    Vec3 h = candidates[best];
    frame_u_ = (h - dot(h, axis_) * axis_).normalized();
    frame_v_ = cross(axis_, frame_u_);
}

CapDomain CapDomain::from_boundary_radius(Vec3 axis, double r) {
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("boundary radius must satisfy 0 < r < 1");
    return CapDomain(axis, std::asin(r));
}

bool CapDomain::operator==(const CapDomain& o) const {
    return axis_.x == o.axis_.x && axis_.y == o.axis_.y && axis_.z == o.axis_.z &&
           theta_max_ == o.theta_max_;
}

PolarGrid::PolarGrid(CapDomain domain, int n_theta, int n_phi)
    : domain_(domain), n_theta_(n_theta), n_phi_(n_phi) {
    if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
    if (n_phi < 8 || n_phi % 2 != 0) throw std::invalid_argument("n_phi must be even and >= 8");
    dtheta_ = domain_.theta_max() / n_theta_;
    dphi_ = 2.0 * M_PI / n_phi_;
}

Vec3 PolarGrid::unit_point(int node) const {
    double th = theta(node), ph = phi(node);
    double st = std::sin(th), ct = std::cos(th);
    Vec3 radial = std::cos(ph) * domain_.frame_u() + std::sin(ph) * domain_.frame_v();
    return st * radial + ct * domain_.axis();
}

void PolarGrid::tangent_frame(int node, Vec3& e1, Vec3& e2) const {
    double th = theta(node), ph = phi(node);
    double st = std::sin(th), ct = std::cos(th);
    Vec3 radial = std::cos(ph) * domain_.frame_u() + std::sin(ph) * domain_.frame_v();
    Vec3 azimuthal = -std::sin(ph) * domain_.frame_u() + std::cos(ph) * domain_.frame_v();
    e1 = ct * radial - st * domain_.axis();
    e2 = azimuthal;
}

bool PolarGrid::operator==(const PolarGrid& o) const {
    return domain_ == o.domain_ && n_theta_ == o.n_theta_ && n_phi_ == o.n_phi_;
}

double ScalarField::max_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double ScalarField::min() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::min(m, v);
    return m;
}

double ScalarField::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values_) m = std::max(m, v);
    return m;
}

bool ScalarField::all_finite() const {
    for (double v : values_)
        if (!std::isfinite(v)) return false;
    return true;
}

void ScalarField::validate(const char* what) const {
    if (!all_finite())
        throw std::invalid_argument(std::string(what) + ": field contains non-finite values");
}

static void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.grid() != b.grid()) throw std::invalid_argument("fields live on different grids");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    ScalarField out = a;
    for (int i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b);
    ScalarField out = a;
    for (int i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

double BoundaryValues::min() const { return *std::min_element(values_.begin(), values_.end()); }
double BoundaryValues::max() const { return *std::max_element(values_.begin(), values_.end()); }

double BoundaryValues::max_tangential_derivative(const PolarGrid& grid) const {
    if (grid.n_phi() != n_phi_) throw std::invalid_argument("boundary data does not match grid");
    double ds = std::sin(grid.domain().theta_max()) * grid.dphi();
    double m = 0.0;
    for (int j = 0; j < n_phi_; ++j) {
        double d = (values_[static_cast<size_t>((j + 1) % n_phi_)] -
                    values_[static_cast<size_t>((j + n_phi_ - 1) % n_phi_)]) /
                   (2.0 * ds);
        m = std::max(m, std::abs(d));
    }
    return m;
}

ScalarField BoundaryValues::meridian_extension(const PolarGrid& grid) const {
    if (grid.n_phi() != n_phi_) throw std::invalid_argument("boundary data does not match grid");
    ScalarField out(grid);
    double mean = 0.0;
    for (double v : values_) mean += v;
    mean /= n_phi_;
    out[0] = mean;
    for (int i = 1; i <= grid.n_theta(); ++i)
        for (int j = 0; j < n_phi_; ++j) out[grid.node(i, j)] = values_[static_cast<size_t>(j)];
    return out;
}

void BoundaryValues::impose(ScalarField& u) const {
    const PolarGrid& g = u.grid();
    if (g.n_phi() != n_phi_) throw std::invalid_argument("boundary data does not match grid");
    for (int j = 0; j < n_phi_; ++j) u[g.node(g.n_theta(), j)] = values_[static_cast<size_t>(j)];
}

bool BoundaryValues::matches(const ScalarField& u) const {
    const PolarGrid& g = u.grid();
    if (g.n_phi() != n_phi_) return false;
    for (int j = 0; j < n_phi_; ++j)
        if (u[g.node(g.n_theta(), j)] != values_[static_cast<size_t>(j)]) return false;
    return true;
}

ScalarField distance_to_boundary(const PolarGrid& grid) {
    ScalarField d(grid);
    double theta_max = grid.domain().theta_max();
    for (int p = 0; p < grid.node_count(); ++p) d[p] = theta_max - grid.theta(p);
    return d;
}

double parallel_mean_curvature(const CapDomain& domain, double eps) {
    if (!(eps >= 0.0) || eps >= domain.theta_max())
        throw HypothesisError("parallel circle distance must satisfy 0 <= eps < theta_max");
    return 1.0 / std::tan(domain.theta_max() - eps);
}

double laplacian_distance(const CapDomain& domain, double eps) {
    return -(kDim - 1) * parallel_mean_curvature(domain, eps);
}

Vec3 embed(const PolarGrid& grid, int node, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("radial factor rho must be positive");
    return rho * grid.unit_point(node);
}

ScalarField restrict_to_coarse(const ScalarField& fine, const PolarGrid& coarse) {
    const PolarGrid& fg = fine.grid();
    if (fg != coarse.refined())
        throw std::invalid_argument("fine grid is not the refinement of the coarse grid");
    ScalarField out(coarse);
    out[0] = fine[0];
    for (int i = 1; i <= coarse.n_theta(); ++i)
        for (int j = 0; j < coarse.n_phi(); ++j)
            out[coarse.node(i, j)] = fine[fg.node(2 * i, 2 * j)];
    return out;
}

}  // namespace cmc
