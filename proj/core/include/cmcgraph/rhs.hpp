#ifndef CMCGRAPH_RHS_HPP
#define CMCGRAPH_RHS_HPP

#include <string>
#include <vector>

#include "cmcgraph/geometry.hpp"

namespace cmc {

/// The two homotopy families of right-hand sides Upsilon_t(rho x).
///
/// Subsolution family (stage 1), anchored at the subsolution's curvature:
///   Upsilon_t(rho x) = -rho^{-C} (t eps + (1-t) rho_bar^C n H_bar(x)),
/// so at t = 0 the subsolution solves the problem exactly.
///
/// Target family (stage 2), reaching the constant target curvature:
///   Upsilon_t(rho x) = -t n H - (1-t) eps rho^{-C};
/// at t = 0 it coincides bit-exactly with the subsolution family at t = 1.
enum class RhsFamily { Subsolution, Target };

const char* to_string(RhsFamily family);

struct RightHandSide {
    RhsFamily family = RhsFamily::Subsolution;
    double t = 0.0;                 // homotopy parameter in [0, 1]
    double C = 2.0;                 // decay exponent, > 1
    double eps = 0.0;               // slack constant of the curvature gap
    double H_target = 0.0;          // target constant mean curvature
    ScalarField H_bar;              // subsolution mean curvature, node-wise
    ScalarField ubar;               // subsolution field
    double ell = 1.0;               // inf e^{ubar}

    RightHandSide(ScalarField H_bar_field, ScalarField ubar_field);

    RightHandSide with(RhsFamily f, double t_value) const;

    /// Upsilon_t(e^{u_p} x_p) at one node.
    double value_at(int node, double u_value) const;

    /// d/du of value_at, holding the node fixed (zero-order Jacobian part).
    double du_at(int node, double u_value) const;
};

/// Node-wise Upsilon_t(e^u x); non-positive for admissible constants.
ScalarField eval_rhs(const RightHandSide& rhs, const ScalarField& u);

/// eps for a given exponent C: half the slack in n inf H_bar > n H + eps/ell^C.
double eps_for_constant(const ScalarField& ubar, const ScalarField& H_bar, double H_target,
                        double C);

struct RhoMonotonicityReport {
    RhsFamily family;
    double t;
    double min_derivative;  // min over nodes and rho samples of d/drho (rho Upsilon)
    int worst_node;
    bool applicable;  // false for the target family at t = 1
    bool pass;        // applicable ? min_derivative >= 0 : true
};

/// Checks d/drho (rho Upsilon_t(rho x)) >= 0 for rho <= rho_bar via the
/// closed-form derivative on a geometric ladder of rho samples per node.
RhoMonotonicityReport monotone_rho_check(const RightHandSide& rhs, const ScalarField& ubar);

struct ConstantSelection {
    double C;
    double eps;
    std::vector<RhoMonotonicityReport> reports;  // all checks run at the accepted C
};

/// Picks eps from the curvature gap and the smallest doubling C in {2,4,8,...}
/// for which the radial monotonicity check passes for both families at
/// t in {0, 1/4, 1/2, 3/4, 1} (target family waived at t = 1).
/// Throws HypothesisError unless 0 < H_target < min H_bar.
ConstantSelection select_constants(const ScalarField& ubar, const ScalarField& H_bar,
                                   double H_target);

}  // namespace cmc

#endif
