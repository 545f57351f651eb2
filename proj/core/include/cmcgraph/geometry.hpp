#ifndef CMCGRAPH_GEOMETRY_HPP
#define CMCGRAPH_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace cmc {

/// Ambient dimension of the graphs: surfaces over domains of the 2-sphere.
/// Formulas keep the symbolic factors n and n-1 of the general theory.
inline constexpr int kDim = 2;

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    Vec3 normalized() const;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

/// Geodesic cap of the unit sphere: all points within colatitude theta_max of
/// the axis. theta_max is restricted to (0, pi/2) so the boundary circle has
/// strictly positive geodesic curvature cot(theta_max).
class CapDomain {
  public:
    CapDomain(Vec3 axis, double theta_max);

    /// Cap whose boundary circle has Euclidean radius r, theta_max = asin(r).
    static CapDomain from_boundary_radius(Vec3 axis, double r);

    const Vec3& axis() const { return axis_; }
    double theta_max() const { return theta_max_; }
    double diameter() const { return 2.0 * theta_max_; }

    /// Curvature of the boundary circle w.r.t. the inward normal, cot(theta_max).
    double boundary_mean_curvature() const { return 1.0 / std::tan(theta_max_); }

    /// Orthonormal tangent pair completing the axis to a right-handed triad.
    /// Azimuth phi = 0 points along frame_u().
    Vec3 frame_u() const { return frame_u_; }
    Vec3 frame_v() const { return frame_v_; }

    bool operator==(const CapDomain& o) const;

  private:
    Vec3 axis_;
    double theta_max_;
    Vec3 frame_u_, frame_v_;
};

/// Geodesic polar mesh on a cap: rings theta_i = i * dtheta for i = 0..n_theta
/// (ring n_theta is the boundary), n_phi equispaced azimuths per ring, and a
/// single shared node at the pole theta = 0.
///
/// Node layout: index 0 is the pole; node (ring i >= 1, azimuth j) is
/// 1 + (i-1)*n_phi + j. Total 1 + n_theta*n_phi nodes.
class PolarGrid {
  public:
    PolarGrid(CapDomain domain, int n_theta, int n_phi);

    const CapDomain& domain() const { return domain_; }
    int n_theta() const { return n_theta_; }
    int n_phi() const { return n_phi_; }
    double dtheta() const { return dtheta_; }
    double dphi() const { return dphi_; }

    int node_count() const { return 1 + n_theta_ * n_phi_; }
    int interior_count() const { return 1 + (n_theta_ - 1) * n_phi_; }

    int node(int ring, int j) const { return ring == 0 ? 0 : 1 + (ring - 1) * n_phi_ + wrap(j); }
    int ring_of(int node) const { return node == 0 ? 0 : 1 + (node - 1) / n_phi_; }
    int azimuth_of(int node) const { return node == 0 ? 0 : (node - 1) % n_phi_; }

    double theta(int node) const { return ring_of(node) * dtheta_; }
    double phi(int node) const { return azimuth_of(node) * dphi_; }

    bool is_pole(int node) const { return node == 0; }
    bool is_boundary(int node) const { return ring_of(node) == n_theta_; }

    /// Unit-sphere position of a node in ambient coordinates.
    Vec3 unit_point(int node) const;

    /// Orthonormal tangent frame (e_theta, e_phi/sin(theta)) at a node; at the
    /// pole the frame of the phi = 0 meridian is used.
    void tangent_frame(int node, Vec3& e1, Vec3& e2) const;

    PolarGrid refined() const { return PolarGrid(domain_, 2 * n_theta_, 2 * n_phi_); }

    bool operator==(const PolarGrid& o) const;
    bool operator!=(const PolarGrid& o) const { return !(*this == o); }

  private:
    int wrap(int j) const {
        j %= n_phi_;
        return j < 0 ? j + n_phi_ : j;
    }

    CapDomain domain_;
    int n_theta_, n_phi_;
    double dtheta_, dphi_;
};

/// One real value per grid node. Values are expected to stay finite; the
/// solver and I/O boundaries enforce this via validate().
class ScalarField {
  public:
    explicit ScalarField(PolarGrid grid, double fill = 0.0)
        : grid_(std::move(grid)), values_(static_cast<size_t>(grid_.node_count()), fill) {}

    const PolarGrid& grid() const { return grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    double operator[](int node) const { return values_[static_cast<size_t>(node)]; }
    double& operator[](int node) { return values_[static_cast<size_t>(node)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    double max_norm() const;
    double min() const;
    double max() const;

    /// True iff every value is finite.
    bool all_finite() const;

    /// Throws std::invalid_argument when a value is non-finite.
    void validate(const char* what) const;

  private:
    PolarGrid grid_;
    std::vector<double> values_;
};

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);

/// Dirichlet data on the boundary ring, one value per azimuth index.
class BoundaryValues {
  public:
    explicit BoundaryValues(const PolarGrid& grid, double fill = 0.0)
        : n_phi_(grid.n_phi()), values_(static_cast<size_t>(grid.n_phi()), fill) {}

    int size() const { return n_phi_; }
    double operator[](int j) const { return values_[static_cast<size_t>(j)]; }
    double& operator[](int j) { return values_[static_cast<size_t>(j)]; }

    double min() const;
    double max() const;

    /// Max |d phi / ds| along the boundary circle (s = arc length), by central
    /// differences over the ring.
    double max_tangential_derivative(const PolarGrid& grid) const;

    /// Extends the data into the cap, constant along each meridian (the normal
    /// direction of every parallel circle). The pole takes the ring average.
    ScalarField meridian_extension(const PolarGrid& grid) const;

    /// Overwrites the boundary ring of a field with this data, bit-exact.
    void impose(ScalarField& u) const;

    /// True iff the boundary ring of u equals this data exactly.
    bool matches(const ScalarField& u) const;

  private:
    int n_phi_;
    std::vector<double> values_;
};

/// Distance to the boundary, d = theta_max - theta at every node.
ScalarField distance_to_boundary(const PolarGrid& grid);

/// Mean curvature of the parallel circle {d = eps} w.r.t. the inward normal:
/// cot(theta_max - eps). eps = 0 gives the boundary mean curvature.
double parallel_mean_curvature(const CapDomain& domain, double eps);

/// Laplacian of the distance function on {d = eps}: -(n-1) * cot(theta_max - eps).
double laplacian_distance(const CapDomain& domain, double eps);

/// Position rho * (unit sphere point of the node); rho must be positive.
Vec3 embed(const PolarGrid& grid, int node, double rho);

/// Restriction of a field on grid.refined() back to grid (node subset, exact).
ScalarField restrict_to_coarse(const ScalarField& fine, const PolarGrid& coarse);

}  // namespace cmc

#endif
