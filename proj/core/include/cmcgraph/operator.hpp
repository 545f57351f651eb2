#ifndef CMCGRAPH_OPERATOR_HPP
#define CMCGRAPH_OPERATOR_HPP

#include <Eigen/Sparse>
#include <vector>

#include "cmcgraph/geometry.hpp"

namespace cmc {

struct RightHandSide;  // rhs.hpp

/// Symmetric 2x2 tensor in the orthonormal tangent frame (e_theta, e_phi/sin).
struct Sym2 {
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;

    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m12; }
};

/// Frame components of the covariant gradient and Hessian of a field.
struct FieldDerivatives {
    std::vector<double> g1, g2;         // gradient components
    std::vector<double> h11, h12, h22;  // covariant Hessian components
};

/// Second-order finite-difference stencils for the covariant gradient and
/// Hessian on a polar grid, with the S^2 Christoffel terms folded into the
/// weights. Interior rings use central differences (ring 0 collapsing to the
/// pole node), the boundary ring uses one-sided differences in theta, and the
/// pole row comes from a least-squares quadratic fit over the pole and the
/// first ring in geodesic normal coordinates.
class DerivativeStencils {
  public:
    struct Entry {
        int node;
        double w;
    };
    struct Row {
        std::vector<Entry> g1, g2, h11, h12, h22;
    };

    explicit DerivativeStencils(const PolarGrid& grid);

    const PolarGrid& grid() const { return grid_; }
    const Row& row(int node) const { return rows_[static_cast<size_t>(node)]; }

    FieldDerivatives apply(const ScalarField& u) const;

  private:
    PolarGrid grid_;
    std::vector<Row> rows_;
};

std::vector<Sym2> covariant_hessian(const ScalarField& u);

/// Pointwise geometry of the radial graph e^u x: induced metric, unit normal,
/// second fundamental form, mean curvature, and the gradient factor W.
struct RadialGraphGeometry {
    std::vector<Sym2> metric;
    std::vector<Vec3> normal;
    std::vector<Sym2> second_fundamental;
    std::vector<double> mean_curvature;
    std::vector<double> w;        // sqrt(1 + |grad u|^2)
    std::vector<double> support;  // <N, X> = -e^u / W, negative by orientation
};

RadialGraphGeometry graph_geometry(const ScalarField& u);
RadialGraphGeometry graph_geometry(const DerivativeStencils& stencils, const ScalarField& u);

/// The radial-graph mean curvature operator,
///   Q[u] = (1/(e^u W)) * (sum_ij (d_ij - u_i u_j / W^2) Hess_ij u - n),
/// evaluated at every node (one-sided stencils on the boundary ring).
/// Satisfies Q[u] = -n H(u) and Q[u + c] = e^{-c} Q[u].
ScalarField apply_Q(const ScalarField& u);
ScalarField apply_Q(const DerivativeStencils& stencils, const ScalarField& u);

/// The divergence-form variant, identically e^u * Q[u].
ScalarField apply_Q_tilde(const ScalarField& u);
ScalarField apply_Q_tilde(const DerivativeStencils& stencils, const ScalarField& u);

/// Discrete residual Q[u] - rhs(u) and its Jacobian over the unknown nodes
/// (pole + interior rings; Dirichlet rows/columns eliminated).
struct DiscreteOperator {
    ScalarField residual;                  // full field, zero on the boundary ring
    Eigen::SparseMatrix<double> jacobian;  // unknowns x unknowns
    std::vector<int> unknown_of_node;      // -1 for boundary nodes
    std::vector<int> node_of_unknown;
};

/// Residual of the Dirichlet problem at the unknown nodes (boundary rows 0).
ScalarField residual(const DerivativeStencils& stencils, const ScalarField& u,
                     const RightHandSide& rhs);

DiscreteOperator linearize(const ScalarField& u, const RightHandSide& rhs);
DiscreteOperator linearize(const DerivativeStencils& stencils, const ScalarField& u,
                           const RightHandSide& rhs);

/// Finite-difference weights on arbitrary nodes (Fornberg's recurrence):
/// weights[k] reproduces d^m/dx^m at x0 from values at nodes[k].
std::vector<double> fd_weights(double x0, const std::vector<double>& nodes, int order);

}  // namespace cmc

#endif
