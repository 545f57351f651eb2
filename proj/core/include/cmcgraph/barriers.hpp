#ifndef CMCGRAPH_BARRIERS_HPP
#define CMCGRAPH_BARRIERS_HPP

#include "cmcgraph/geometry.hpp"

namespace cmc {

/// Lower barrier w = f(d) + inf phi with f(d) = -(e^{CA}/C)(1 - e^{-Cd});
/// f(0) = 0 and f' = -e^{C(A-d)} < 0, so w caps solutions from below once
/// the operator margin is certified positive.
struct HeightBarrier {
    double C;     // steepness exponent
    double A;     // any constant above the domain diameter
    double base;  // inf of the boundary data

    double f(double d) const;
    double f_prime(double d) const;

    /// w on the grid: f(distance to boundary) + base.
    ScalarField field(const PolarGrid& grid) const;
};

/// Boundary-gradient barrier w = phi_ext + f(d) with f(d) = -mu ln(1 + K d),
/// mu = C / ln(1 + K); f'(0) = -mu K controls the normal slope at the boundary.
struct GradientBarrier {
    double K;
    double C;

    double mu() const;
    double f(double d) const;
    double f_prime(double d) const;
    double f_second(double d) const;  // equals f'^2 / mu

    ScalarField field(const PolarGrid& grid, const BoundaryValues& phi) const;
};

enum class BarrierKind { Height, Gradient };

struct BarrierCertificate {
    BarrierKind kind;
    double C = 0.0;
    double A = 0.0;          // height barrier only
    double K = 0.0;          // gradient barrier only
    double mu = 0.0;         // gradient barrier only
    double base = 0.0;       // inf of boundary data (height barrier)
    double eps_strip = 0.0;  // certified strip width (gradient barrier)
    double min_margin;       // min of Q~[w] over the certified region
    int worst_node;          // where the min is attained
    double implied_bound;    // height bound L, or boundary gradient bound
    bool valid;              // min_margin > 0
};

struct ConstantSearchPolicy {
    double initial = 1.0;
    int max_doublings = 40;
};

/// Margin min Q~[w] over the pole and interior nodes for the height barrier.
double height_barrier_margin(const PolarGrid& grid, const HeightBarrier& barrier,
                             int* worst_node = nullptr);

/// Margin min Q~[w] over interior nodes with 0 < d < eps_strip.
double gradient_barrier_margin(const PolarGrid& grid, const BoundaryValues& phi,
                               const GradientBarrier& barrier, double eps_strip,
                               int* worst_node = nullptr);

/// Smallest doubling C certifying Q~[w] > 0 on the whole cap.
/// Throws SearchExhaustedError when the doubling budget runs out.
BarrierCertificate certify_height_barrier(const PolarGrid& grid, const BoundaryValues& phi,
                                          const ConstantSearchPolicy& search = {});

/// Doubling search over K, then C, certifying Q~[w] > 0 on the boundary strip.
BarrierCertificate certify_gradient_barrier(const PolarGrid& grid, const BoundaryValues& phi,
                                            double eps_strip,
                                            const ConstantSearchPolicy& search = {});

/// Node-wise enclosure margins of a solution between the certified lower
/// barrier and the subsolution; both should be >= -1e-8 for a valid solve.
struct EnclosureReport {
    double min_above_barrier;      // min (u - w)
    double min_below_subsolution;  // min (ubar - u)
    bool ok;
};

EnclosureReport check_solution_between_barriers(const ScalarField& u,
                                                const BarrierCertificate& height_cert,
                                                const ScalarField& ubar);

}  // namespace cmc

#endif
