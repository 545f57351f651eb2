#include "cmcgraph/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cmcgraph/operator.hpp"

namespace cmc {

ScalarField cap_solution(const OffsetSphere& sphere, SphereBranch branch, const PolarGrid& grid) {
    if (!(sphere.radius > 0.0)) throw std::invalid_argument("sphere radius must be positive");
    const long double a = sphere.center_offset;
    const long double R = sphere.radius;
    const long double sign = branch == SphereBranch::Far ? 1.0L : -1.0L;
    const int nt = grid.n_theta();

    // Evaluated in extended precision per meridian ring; the profile is
    // axisymmetric so one value per ring suffices.
    std::vector<double> profile(static_cast<size_t>(nt) + 1);
    for (int i = 0; i <= nt; ++i) {
        long double th = static_cast<long double>(i) * grid.domain().theta_max() / nt;
        long double s = sinl(th), c = cosl(th);
        long double disc = R * R - a * a * s * s;
        if (!(disc > 0.0L))
            throw std::invalid_argument(
                "radial line misses the sphere at theta = " + std::to_string(static_cast<double>(th)));
        long double rho = a * c + sign * sqrtl(disc);
        if (!(rho > 0.0L))
            throw std::invalid_argument(
                "sphere branch falls behind the origin at theta = " +
                std::to_string(static_cast<double>(th)));
        profile[static_cast<size_t>(i)] = static_cast<double>(logl(rho));
    }

    ScalarField u(grid);
    for (int p = 0; p < grid.node_count(); ++p) u[p] = profile[static_cast<size_t>(grid.ring_of(p))];
    return u;
}

double cap_pair_radius(double r, double h) {
    return std::sqrt(1.0 + h * h + 2.0 * h * std::sqrt(1.0 - r * r));
}

double cap_pair_max_offset(double r) { return (2.0 * r * r - 1.0) / std::sqrt(1.0 - r * r); }

CapPair cap_pair(double r, double h, const PolarGrid& grid) {
    if (!(r >= 1.0 / std::sqrt(2.0) && r < 1.0))
        throw std::invalid_argument("boundary radius must satisfy 1/sqrt(2) <= r < 1");
    if (!(h >= 0.0) || h > cap_pair_max_offset(r))
        throw std::invalid_argument("center drop h outside [0, (2r^2-1)/sqrt(1-r^2)]");
    if (std::abs(grid.domain().theta_max() - std::asin(r)) > 1e-12)
        throw std::invalid_argument("grid aperture does not match the boundary circle radius");

    double q = std::sqrt(1.0 - r * r);
    double R = cap_pair_radius(r, h);
    CapPair pair{cap_solution({-h, R}, SphereBranch::Far, grid),
                 cap_solution({2.0 * q + h, R}, SphereBranch::Far, grid), R, 1.0 / R};
    return pair;
}

std::vector<double> axisymmetric_ode_residual(const std::vector<double>& profile,
                                              double theta_max, double H) {
    const int n = static_cast<int>(profile.size()) - 1;
    if (n < 6) throw std::invalid_argument("profile too short for fourth-order differences");
    const double dt = theta_max / n;

    auto value = [&](int k) {  // even reflection through the pole
        return profile[static_cast<size_t>(k < 0 ? -k : k)];
    };

    std::vector<double> out(profile.size());
    for (int i = 0; i <= n; ++i) {
        int lo = std::min(i - 2, n - 5);  // 6-node window, reflected below the pole
        std::vector<double> nodes(6);
        for (int k = 0; k < 6; ++k) nodes[static_cast<size_t>(k)] = (lo + k) * dt;
        std::vector<double> w1 = fd_weights(i * dt, nodes, 1);
        std::vector<double> w2 = fd_weights(i * dt, nodes, 2);
        // deviation form: derivatives of constants vanish exactly
        double du = 0.0, ddu = 0.0;
        for (int k = 0; k < 6; ++k) {
            double dev = value(lo + k) - profile[static_cast<size_t>(i)];
            du += w1[static_cast<size_t>(k)] * dev;
            ddu += w2[static_cast<size_t>(k)] * dev;
        }

        double u = profile[static_cast<size_t>(i)];
        double q;
        if (i == 0) {
            // cot(theta) u' -> u'' at the pole; gradient vanishes there.
            q = std::exp(-u) * (2.0 * ddu - kDim);
        } else {
            double th = i * dt;
            double w2g = 1.0 + du * du;
            double s = ddu / w2g + du * std::cos(th) / std::sin(th);
            q = std::exp(-u) * (s - kDim) / std::sqrt(w2g);
        }
        out[static_cast<size_t>(i)] = q + kDim * H;
    }
    return out;
}

}  // namespace cmc
