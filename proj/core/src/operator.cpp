#include "cmcgraph/operator.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "cmcgraph/rhs.hpp"

namespace cmc {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int order) {
    const int n = static_cast<int>(x.size());
    if (n < order + 1) throw std::invalid_argument("fd_weights: not enough nodes for the order");
    // Fornberg's recurrence for interpolation-derivative weights.
    std::vector<std::vector<double>> c(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(order) + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        int mn = std::min(i, order);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[static_cast<size_t>(i)] - x0;
        for (int j = 0; j < i; ++j) {
            double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                        c1 *
                        (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                         c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) /
                        c2;
                c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
                    (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                     k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) /
                    c3;
            c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] = c[static_cast<size_t>(i)][static_cast<size_t>(order)];
    return w;
}

namespace {

void push(std::vector<DerivativeStencils::Entry>& row, int node, double w) {
    if (w != 0.0) row.push_back({node, w});
}

}  // namespace

DerivativeStencils::DerivativeStencils(const PolarGrid& grid) : grid_(grid) {
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    if (nt < 4) throw std::invalid_argument("grid too coarse: n_theta must be >= 4");
    const double dt = grid.dtheta();
    const double dp = grid.dphi();
    rows_.resize(static_cast<size_t>(grid.node_count()));

    // Pole row: least-squares quadratic in geodesic normal coordinates
    // (xi, eta) = theta (cos phi, sin phi) over the pole and ring 1.
    {
        const int m = 1 + np;
        Eigen::MatrixXd M(m, 6);
        M.setZero();
        M(0, 0) = 1.0;
        for (int j = 0; j < np; ++j) {
            double xi = dt * std::cos(j * dp);
            double eta = dt * std::sin(j * dp);
            M(j + 1, 0) = 1.0;
            M(j + 1, 1) = xi;
            M(j + 1, 2) = eta;
            M(j + 1, 3) = 0.5 * xi * xi;
            M(j + 1, 4) = xi * eta;
            M(j + 1, 5) = 0.5 * eta * eta;
        }
        Eigen::MatrixXd pinv =
            M.colPivHouseholderQr().solve(Eigen::MatrixXd::Identity(m, m));
        Row& r = rows_[0];
        auto fill = [&](std::vector<Entry>& row, int beta) {
            row.reserve(static_cast<size_t>(m));
            row.push_back({0, pinv(beta, 0)});
            for (int j = 0; j < np; ++j) row.push_back({grid.node(1, j), pinv(beta, j + 1)});
        };
        fill(r.g1, 1);
        fill(r.g2, 2);
        fill(r.h11, 3);
        fill(r.h12, 4);
        fill(r.h22, 5);
    }

    for (int i = 1; i <= nt; ++i) {
        const double th = i * dt;
        const double st = std::sin(th);
        const double ct = std::cos(th);
        const double cot = ct / st;
        for (int j = 0; j < np; ++j) {
            Row& r = rows_[static_cast<size_t>(grid.node(i, j))];
            const int c = grid.node(i, j);
            const int e = grid.node(i, j + 1);
            const int w = grid.node(i, j - 1);

            if (i < nt) {
                const int s = grid.node(i - 1, j);  // collapses to the pole at i = 1
                const int n = grid.node(i + 1, j);
                const int ne = grid.node(i + 1, j + 1);
                const int nw = grid.node(i + 1, j - 1);
                const int se = grid.node(i - 1, j + 1);
                const int sw = grid.node(i - 1, j - 1);

                // g1 = u_theta
                push(r.g1, n, 1.0 / (2.0 * dt));
                push(r.g1, s, -1.0 / (2.0 * dt));
                // g2 = u_phi / sin
                push(r.g2, e, 1.0 / (2.0 * dp * st));
                push(r.g2, w, -1.0 / (2.0 * dp * st));
                // h11 = u_theta_theta
                push(r.h11, n, 1.0 / (dt * dt));
                push(r.h11, c, -2.0 / (dt * dt));
                push(r.h11, s, 1.0 / (dt * dt));
                // h12 = (u_theta_phi - cot * u_phi) / sin
                {
                    const double wmix = 1.0 / (4.0 * dt * dp * st);
                    push(r.h12, ne, wmix);
                    push(r.h12, nw, -wmix);
                    push(r.h12, se, -wmix);  // cancels at i = 1 (se = sw = pole)
                    push(r.h12, sw, wmix);
                    const double wphi = cot / (2.0 * dp * st);
                    push(r.h12, e, -wphi);
                    push(r.h12, w, wphi);
                }
                // h22 = u_phi_phi / sin^2 + cot * u_theta
                {
                    const double wpp = 1.0 / (dp * dp * st * st);
                    push(r.h22, e, wpp);
                    push(r.h22, c, -2.0 * wpp);
                    push(r.h22, w, wpp);
                    push(r.h22, n, cot / (2.0 * dt));
                    push(r.h22, s, -cot / (2.0 * dt));
                }
            } else {
                // Boundary ring: one-sided second-order stencils in theta.
                const int b1 = grid.node(i - 1, j);
                const int b2 = grid.node(i - 2, j);
                const int b3 = grid.node(i - 3, j);
                const double w0 = 3.0 / (2.0 * dt), w1 = -4.0 / (2.0 * dt), w2 = 1.0 / (2.0 * dt);

                push(r.g1, c, w0);
                push(r.g1, b1, w1);
                push(r.g1, b2, w2);

                push(r.g2, e, 1.0 / (2.0 * dp * st));
                push(r.g2, w, -1.0 / (2.0 * dp * st));

                push(r.h11, c, 2.0 / (dt * dt));
                push(r.h11, b1, -5.0 / (dt * dt));
                push(r.h11, b2, 4.0 / (dt * dt));
                push(r.h11, b3, -1.0 / (dt * dt));

                {
                    // One-sided theta difference of the centered phi derivative.
                    const double wphi = 1.0 / (2.0 * dp * st);
                    auto mixed = [&](int ring_node_e, int ring_node_w, double wt) {
                        push(r.h12, ring_node_e, wt * wphi);
                        push(r.h12, ring_node_w, -wt * wphi);
                    };
                    mixed(e, w, w0);
                    mixed(grid.node(i - 1, j + 1), grid.node(i - 1, j - 1), w1);
                    mixed(grid.node(i - 2, j + 1), grid.node(i - 2, j - 1), w2);
                    const double wp = cot / (2.0 * dp * st);
                    push(r.h12, e, -wp);
                    push(r.h12, w, wp);
                }
                {
                    const double wpp = 1.0 / (dp * dp * st * st);
                    push(r.h22, e, wpp);
                    push(r.h22, c, -2.0 * wpp);
                    push(r.h22, w, wpp);
                    push(r.h22, c, cot * w0);
                    push(r.h22, b1, cot * w1);
                    push(r.h22, b2, cot * w2);
                }
            }
        }
    }
}

FieldDerivatives DerivativeStencils::apply(const ScalarField& u) const {
    if (u.grid() != grid_) throw std::invalid_argument("field grid does not match stencils");
    const int n = grid_.node_count();
    FieldDerivatives d;
    d.g1.assign(static_cast<size_t>(n), 0.0);
    d.g2.assign(static_cast<size_t>(n), 0.0);
    d.h11.assign(static_cast<size_t>(n), 0.0);
    d.h12.assign(static_cast<size_t>(n), 0.0);
    d.h22.assign(static_cast<size_t>(n), 0.0);
    // Deviation form: summing w * (u_q - u_p) makes every derivative of a
    // constant field exactly zero, independent of weight rounding.
    auto sum = [&u](const std::vector<Entry>& row, double center) {
        double s = 0.0;
        for (const auto& e : row) s += e.w * (u[e.node] - center);
        return s;
    };
    for (int p = 0; p < n; ++p) {
        const Row& r = rows_[static_cast<size_t>(p)];
        const double c = u[p];
        d.g1[static_cast<size_t>(p)] = sum(r.g1, c);
        d.g2[static_cast<size_t>(p)] = sum(r.g2, c);
        d.h11[static_cast<size_t>(p)] = sum(r.h11, c);
        d.h12[static_cast<size_t>(p)] = sum(r.h12, c);
        d.h22[static_cast<size_t>(p)] = sum(r.h22, c);
    }
    return d;
}

std::vector<Sym2> covariant_hessian(const ScalarField& u) {
    u.validate("covariant_hessian");
    DerivativeStencils st(u.grid());
    FieldDerivatives d = st.apply(u);
    std::vector<Sym2> out(static_cast<size_t>(u.size()));
    for (size_t p = 0; p < out.size(); ++p) out[p] = {d.h11[p], d.h12[p], d.h22[p]};
    return out;
}

namespace {

// Pointwise value and partial derivatives of Q at one node.
struct QPoint {
    double value;
    double d_g1, d_g2;
    double d_h11, d_h12, d_h22;
};

QPoint q_point(double u, double g1, double g2, double h11, double h12, double h22) {
    const double v = g1 * g1 + g2 * g2;
    const double w2 = 1.0 + v;
    const double w = std::sqrt(w2);
    const double a11 = 1.0 - g1 * g1 / w2;
    const double a12 = -g1 * g2 / w2;
    const double a22 = 1.0 - g2 * g2 / w2;
    const double s = a11 * h11 + 2.0 * a12 * h12 + a22 * h22;
    const double g = s - kDim;
    const double e = std::exp(-u);

    QPoint q;
    q.value = e * g / w;
    q.d_h11 = e * a11 / w;
    q.d_h12 = 2.0 * e * a12 / w;
    q.d_h22 = e * a22 / w;
    const double hg1 = h11 * g1 + h12 * g2;
    const double hg2 = h12 * g1 + h22 * g2;
    const double ghg = g1 * hg1 + g2 * hg2;
    const double ds_dg1 = -2.0 * hg1 / w2 + 2.0 * g1 * ghg / (w2 * w2);
    const double ds_dg2 = -2.0 * hg2 / w2 + 2.0 * g2 * ghg / (w2 * w2);
    q.d_g1 = e / w * (ds_dg1 - g * g1 / w2);
    q.d_g2 = e / w * (ds_dg2 - g * g2 / w2);
    return q;
}

}  // namespace

RadialGraphGeometry graph_geometry(const DerivativeStencils& stencils, const ScalarField& u) {
    const PolarGrid& grid = u.grid();
    FieldDerivatives d = stencils.apply(u);
    const int n = grid.node_count();

    RadialGraphGeometry geo;
    geo.metric.resize(static_cast<size_t>(n));
    geo.normal.resize(static_cast<size_t>(n));
    geo.second_fundamental.resize(static_cast<size_t>(n));
    geo.mean_curvature.resize(static_cast<size_t>(n));
    geo.w.resize(static_cast<size_t>(n));
    geo.support.resize(static_cast<size_t>(n));

    for (int p = 0; p < n; ++p) {
        const size_t q = static_cast<size_t>(p);
        const double g1 = d.g1[q], g2 = d.g2[q];
        const double v = g1 * g1 + g2 * g2;
        const double w2 = 1.0 + v;
        const double w = std::sqrt(w2);
        const double eu = std::exp(u[p]);
        const double e2u = eu * eu;

        geo.w[q] = w;
        geo.metric[q] = {e2u * (1.0 + g1 * g1), e2u * g1 * g2, e2u * (1.0 + g2 * g2)};

        Vec3 e1, e2;
        grid.tangent_frame(p, e1, e2);
        Vec3 x = grid.unit_point(p);
        geo.normal[q] = (1.0 / w) * (g1 * e1 + g2 * e2 - x);
        geo.support[q] = dot(geo.normal[q], eu * x);

        const double f = eu / w;
        geo.second_fundamental[q] = {f * (1.0 + g1 * g1 - d.h11[q]),
                                     f * (g1 * g2 - d.h12[q]),
                                     f * (1.0 + g2 * g2 - d.h22[q])};

        const double a11 = 1.0 - g1 * g1 / w2;
        const double a12 = -g1 * g2 / w2;
        const double a22 = 1.0 - g2 * g2 / w2;
        const Sym2& h = geo.second_fundamental[q];
        const double nh = (a11 * h.m11 + 2.0 * a12 * h.m12 + a22 * h.m22) / e2u;
        geo.mean_curvature[q] = nh / kDim;
    }
    return geo;
}

RadialGraphGeometry graph_geometry(const ScalarField& u) {
    u.validate("graph_geometry");
    DerivativeStencils st(u.grid());
    return graph_geometry(st, u);
}

ScalarField apply_Q(const DerivativeStencils& stencils, const ScalarField& u) {
    FieldDerivatives d = stencils.apply(u);
    ScalarField out(u.grid());
    for (int p = 0; p < u.size(); ++p) {
        const size_t q = static_cast<size_t>(p);
        out[p] = q_point(u[p], d.g1[q], d.g2[q], d.h11[q], d.h12[q], d.h22[q]).value;
    }
    return out;
}

ScalarField apply_Q(const ScalarField& u) {
    u.validate("apply_Q");
    DerivativeStencils st(u.grid());
    return apply_Q(st, u);
}

ScalarField apply_Q_tilde(const DerivativeStencils& stencils, const ScalarField& u) {
    ScalarField out = apply_Q(stencils, u);
    for (int p = 0; p < u.size(); ++p) out[p] *= std::exp(u[p]);
    return out;
}

ScalarField apply_Q_tilde(const ScalarField& u) {
    u.validate("apply_Q_tilde");
    DerivativeStencils st(u.grid());
    return apply_Q_tilde(st, u);
}

ScalarField residual(const DerivativeStencils& stencils, const ScalarField& u,
                     const RightHandSide& rhs) {
    const PolarGrid& grid = u.grid();
    FieldDerivatives d = stencils.apply(u);
    ScalarField res(grid);
    for (int p = 0; p < u.size(); ++p) {
        if (grid.is_boundary(p)) continue;
        const size_t q = static_cast<size_t>(p);
        double qv = q_point(u[p], d.g1[q], d.g2[q], d.h11[q], d.h12[q], d.h22[q]).value;
        res[p] = qv - rhs.value_at(p, u[p]);
    }
    return res;
}

DiscreteOperator linearize(const DerivativeStencils& stencils, const ScalarField& u,
                           const RightHandSide& rhs) {
    const PolarGrid& grid = u.grid();
    if (rhs.ubar.grid() != grid) throw std::invalid_argument("rhs fields live on another grid");
    FieldDerivatives d = stencils.apply(u);

    DiscreteOperator op{ScalarField(grid), {}, {}, {}};
    op.unknown_of_node.assign(static_cast<size_t>(grid.node_count()), -1);
    op.node_of_unknown.reserve(static_cast<size_t>(grid.interior_count()));
    for (int p = 0; p < grid.node_count(); ++p) {
        if (grid.is_boundary(p)) continue;
        op.unknown_of_node[static_cast<size_t>(p)] = static_cast<int>(op.node_of_unknown.size());
        op.node_of_unknown.push_back(p);
    }
    const int n_unknowns = static_cast<int>(op.node_of_unknown.size());

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<size_t>(n_unknowns) * 12);

    for (int row = 0; row < n_unknowns; ++row) {
        const int p = op.node_of_unknown[static_cast<size_t>(row)];
        const size_t q = static_cast<size_t>(p);
        QPoint qp = q_point(u[p], d.g1[q], d.g2[q], d.h11[q], d.h12[q], d.h22[q]);
        op.residual[p] = qp.value - rhs.value_at(p, u[p]);

        // Zero-order block: dQ/du = -Q[u] minus the rhs derivative in u.
        triplets.emplace_back(row, row, -qp.value - rhs.du_at(p, u[p]));

        const DerivativeStencils::Row& r = stencils.row(p);
        auto scatter = [&](const std::vector<DerivativeStencils::Entry>& entries, double coef) {
            if (coef == 0.0) return;
            for (const auto& e : entries) {
                int col = op.unknown_of_node[static_cast<size_t>(e.node)];
                if (col < 0) continue;  // Dirichlet column eliminated
                triplets.emplace_back(row, col, coef * e.w);
            }
        };
        scatter(r.g1, qp.d_g1);
        scatter(r.g2, qp.d_g2);
        scatter(r.h11, qp.d_h11);
        scatter(r.h12, qp.d_h12);
        scatter(r.h22, qp.d_h22);
    }

    op.jacobian.resize(n_unknowns, n_unknowns);
    op.jacobian.setFromTriplets(triplets.begin(), triplets.end());
    op.jacobian.makeCompressed();
    return op;
}

DiscreteOperator linearize(const ScalarField& u, const RightHandSide& rhs) {
    u.validate("linearize");
    DerivativeStencils st(u.grid());
    return linearize(st, u, rhs);
}

}  // namespace cmc
