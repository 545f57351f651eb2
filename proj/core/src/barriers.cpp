#include "cmcgraph/barriers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cmcgraph/errors.hpp"
#include "cmcgraph/operator.hpp"

namespace cmc {

double HeightBarrier::f(double d) const {
    // exp(CA)/C can overflow long before the product does; keep it in log form
    // and use expm1 so f(0) = 0 exactly.
    return std::exp(C * A - std::log(C)) * std::expm1(-C * d);
}

double HeightBarrier::f_prime(double d) const { return -std::exp(C * (A - d)); }

ScalarField HeightBarrier::field(const PolarGrid& grid) const {
    ScalarField w = distance_to_boundary(grid);
    for (int p = 0; p < w.size(); ++p) w[p] = f(w[p]) + base;
    return w;
}

double GradientBarrier::mu() const { return C / std::log1p(K); }

double GradientBarrier::f(double d) const { return -mu() * std::log1p(K * d); }

double GradientBarrier::f_prime(double d) const { return -mu() * K / (1.0 + K * d); }

double GradientBarrier::f_second(double d) const {
    double fp = f_prime(d);
    return fp * fp / mu();
}

ScalarField GradientBarrier::field(const PolarGrid& grid, const BoundaryValues& phi) const {
    ScalarField w = phi.meridian_extension(grid);
    ScalarField d = distance_to_boundary(grid);
    for (int p = 0; p < w.size(); ++p) w[p] += f(d[p]);
    return w;
}

double height_barrier_margin(const PolarGrid& grid, const HeightBarrier& barrier,
                             int* worst_node) {
    ScalarField w = barrier.field(grid);
    if (!w.all_finite()) {
        if (worst_node) *worst_node = -1;
        return -std::numeric_limits<double>::infinity();
    }
    ScalarField qt = apply_Q_tilde(w);
    double margin = std::numeric_limits<double>::infinity();
    int worst = -1;
    for (int p = 0; p < qt.size(); ++p) {
        if (grid.is_boundary(p)) continue;
        if (qt[p] < margin) {
            margin = qt[p];
            worst = p;
        }
    }
    if (worst_node) *worst_node = worst;
    return margin;
}

double gradient_barrier_margin(const PolarGrid& grid, const BoundaryValues& phi,
                               const GradientBarrier& barrier, double eps_strip,
                               int* worst_node) {
    ScalarField w = barrier.field(grid, phi);
    ScalarField d = distance_to_boundary(grid);
    ScalarField qt = apply_Q_tilde(w);
    double margin = std::numeric_limits<double>::infinity();
    int worst = -1;
    for (int p = 0; p < qt.size(); ++p) {
        if (grid.is_boundary(p) || !(d[p] < eps_strip)) continue;
        if (qt[p] < margin) {
            margin = qt[p];
            worst = p;
        }
    }
    if (worst == -1)
        throw std::invalid_argument("barrier strip contains no interior grid nodes");
    if (worst_node) *worst_node = worst;
    return margin;
}

BarrierCertificate certify_height_barrier(const PolarGrid& grid, const BoundaryValues& phi,
                                          const ConstantSearchPolicy& search) {
    const CapDomain& domain = grid.domain();
    // Standing hypothesis of the whole theory; caps enforce it by construction.
    if (!(domain.boundary_mean_curvature() > 0.0))
        throw HypothesisError("boundary mean curvature must be positive");

    const double A = domain.diameter() * 1.01;
    const double base = phi.min();
    double worst_margin = -std::numeric_limits<double>::infinity();
    int worst_node = -1;

    double C = search.initial;
    for (int k = 0; k <= search.max_doublings; ++k, C *= 2.0) {
        if (C * A - std::log(C) > 700.0) break;  // f would overflow; no point doubling on
        HeightBarrier barrier{C, A, base};
        int node = -1;
        double margin = height_barrier_margin(grid, barrier, &node);
        if (margin > worst_margin) {
            worst_margin = margin;
            worst_node = node;
        }
        if (margin > 0.0) {
            BarrierCertificate cert;
            cert.kind = BarrierKind::Height;
            cert.C = C;
            cert.A = A;
            cert.base = base;
            cert.min_margin = margin;
            cert.worst_node = node;
            cert.implied_bound = std::abs(barrier.f(domain.diameter())) + std::abs(base);
            cert.valid = true;
            return cert;
        }
    }
    throw SearchExhaustedError("height barrier: no doubling C certifies a positive margin",
                               worst_margin, worst_node);
}

BarrierCertificate certify_gradient_barrier(const PolarGrid& grid, const BoundaryValues& phi,
                                            double eps_strip,
                                            const ConstantSearchPolicy& search) {
    if (!(eps_strip > 0.0) || eps_strip >= grid.domain().theta_max())
        throw std::invalid_argument("eps_strip must lie in (0, theta_max)");

    double worst_margin = -std::numeric_limits<double>::infinity();
    int worst_node = -1;

    double K = search.initial;
    for (int i = 0; i <= search.max_doublings; ++i, K *= 2.0) {
        double C = search.initial;
        for (int j = 0; j <= search.max_doublings; ++j, C *= 2.0) {
            GradientBarrier barrier{K, C};
            int node = -1;
            double margin = gradient_barrier_margin(grid, phi, barrier, eps_strip, &node);
            if (margin > worst_margin) {
                worst_margin = margin;
                worst_node = node;
            }
            if (margin > 0.0) {
                BarrierCertificate cert;
                cert.kind = BarrierKind::Gradient;
                cert.C = C;
                cert.K = K;
                cert.mu = barrier.mu();
                cert.eps_strip = eps_strip;
                cert.min_margin = margin;
                cert.worst_node = node;
                double grad_phi = phi.max_tangential_derivative(grid);
                double slope = barrier.mu() * K;  // |f'(0)|
                cert.implied_bound = std::sqrt(grad_phi * grad_phi + slope * slope);
                cert.valid = true;
                return cert;
            }
        }
    }
    throw SearchExhaustedError("gradient barrier: no (K, C) pair certifies a positive margin",
                               worst_margin, worst_node);
}

EnclosureReport check_solution_between_barriers(const ScalarField& u,
                                                const BarrierCertificate& height_cert,
                                                const ScalarField& ubar) {
    if (height_cert.kind != BarrierKind::Height || !height_cert.valid)
        throw std::invalid_argument("enclosure check requires a valid height certificate");
    HeightBarrier barrier{height_cert.C, height_cert.A, height_cert.base};
    ScalarField w = barrier.field(u.grid());

    EnclosureReport rep{std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), false};
    for (int p = 0; p < u.size(); ++p) {
        rep.min_above_barrier = std::min(rep.min_above_barrier, u[p] - w[p]);
        rep.min_below_subsolution = std::min(rep.min_below_subsolution, ubar[p] - u[p]);
    }
    rep.ok = rep.min_above_barrier >= -1e-8 && rep.min_below_subsolution >= -1e-8;
    return rep;
}

}  // namespace cmc
