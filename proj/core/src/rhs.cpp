#include "cmcgraph/rhs.hpp"

#include <cmath>
#include <stdexcept>

#include "cmcgraph/errors.hpp"

namespace cmc {

const char* to_string(RhsFamily family) {
    return family == RhsFamily::Subsolution ? "subsolution" : "target";
}

RightHandSide::RightHandSide(ScalarField H_bar_field, ScalarField ubar_field)
    : H_bar(std::move(H_bar_field)), ubar(std::move(ubar_field)) {
    if (H_bar.grid() != ubar.grid())
        throw std::invalid_argument("subsolution and curvature fields live on different grids");
    H_bar.validate("RightHandSide H_bar");
    ubar.validate("RightHandSide ubar");
    ell = std::exp(ubar.min());
}

RightHandSide RightHandSide::with(RhsFamily f, double t_value) const {
    RightHandSide out = *this;
    out.family = f;
    out.t = t_value;
    return out;
}

double RightHandSide::value_at(int node, double u_value) const {
    if (family == RhsFamily::Subsolution) {
        double coef = t * eps + (1.0 - t) * (std::exp(C * ubar[node]) * kDim * H_bar[node]);
        return -std::exp(-C * u_value) * coef;
    }
    return -(t * kDim * H_target) - ((1.0 - t) * eps) * std::exp(-C * u_value);
}

double RightHandSide::du_at(int node, double u_value) const {
    if (family == RhsFamily::Subsolution) return -C * value_at(node, u_value);
    return C * ((1.0 - t) * eps) * std::exp(-C * u_value);
}

ScalarField eval_rhs(const RightHandSide& rhs, const ScalarField& u) {
    if (u.grid() != rhs.ubar.grid())
        throw std::invalid_argument("field grid does not match right-hand side");
    ScalarField out(u.grid());
    for (int p = 0; p < u.size(); ++p) out[p] = rhs.value_at(p, u[p]);
    return out;
}

double eps_for_constant(const ScalarField& ubar, const ScalarField& H_bar, double H_target,
                        double C) {
    double min_H_bar = H_bar.min();
    if (!(H_target > 0.0) || !(H_target < min_H_bar))
        throw HypothesisError("target curvature must satisfy 0 < H < min of the subsolution's");
    double ell = std::exp(ubar.min());
    return 0.5 * std::pow(ell, C) * (kDim * min_H_bar - kDim * H_target);
}

RhoMonotonicityReport monotone_rho_check(const RightHandSide& rhs, const ScalarField& ubar) {
    const int samples = 16;
    double ell = std::exp(ubar.min());
    RhoMonotonicityReport rep;
    rep.family = rhs.family;
    rep.t = rhs.t;
    rep.applicable = !(rhs.family == RhsFamily::Target && rhs.t == 1.0);
    rep.min_derivative = std::numeric_limits<double>::infinity();
    rep.worst_node = -1;

    for (int p = 0; p < ubar.size(); ++p) {
        double rho_bar = std::exp(ubar[p]);
        for (int k = 0; k <= samples; ++k) {
            double rho = ell * std::pow(rho_bar / ell, static_cast<double>(k) / samples);
            double deriv;
            if (rhs.family == RhsFamily::Subsolution) {
                deriv = (rhs.C - 1.0) * std::pow(rho, -rhs.C) *
                        (rhs.t * rhs.eps +
                         (1.0 - rhs.t) * std::pow(rho_bar, rhs.C) * kDim * rhs.H_bar[p]);
            } else {
                deriv = -rhs.t * kDim * rhs.H_target +
                        (rhs.C - 1.0) * (1.0 - rhs.t) * rhs.eps * std::pow(rho, -rhs.C);
            }
            if (deriv < rep.min_derivative) {
                rep.min_derivative = deriv;
                rep.worst_node = p;
            }
        }
    }
    rep.pass = !rep.applicable || rep.min_derivative >= 0.0;
    return rep;
}

ConstantSelection select_constants(const ScalarField& ubar, const ScalarField& H_bar,
                                   double H_target) {
    if (ubar.grid() != H_bar.grid())
        throw std::invalid_argument("subsolution fields live on different grids");
    const double t_samples[] = {0.0, 0.25, 0.5, 0.75, 1.0};

    double worst = 0.0;
    int worst_node = -1;
    for (double C = 2.0; C <= std::pow(2.0, 30); C *= 2.0) {
        double eps = eps_for_constant(ubar, H_bar, H_target, C);
        RightHandSide proto(H_bar, ubar);
        proto.C = C;
        proto.eps = eps;
        proto.H_target = H_target;

        ConstantSelection sel{C, eps, {}};
        bool ok = true;
        for (RhsFamily family : {RhsFamily::Subsolution, RhsFamily::Target}) {
            for (double t : t_samples) {
                RhoMonotonicityReport rep = monotone_rho_check(proto.with(family, t), ubar);
                sel.reports.push_back(rep);
                if (!rep.pass) {
                    ok = false;
                    if (rep.min_derivative < worst) {
                        worst = rep.min_derivative;
                        worst_node = rep.worst_node;
                    }
                }
            }
        }
        if (ok) return sel;
    }
    throw SearchExhaustedError(
        "no doubling exponent C satisfies the radial monotonicity check", worst, worst_node);
}

}  // namespace cmc
