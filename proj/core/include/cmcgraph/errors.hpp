#ifndef CMCGRAPH_ERRORS_HPP
#define CMCGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cmc {

/// A hypothesis of the existence theory is violated (e.g. the target curvature
/// is not strictly below the subsolution's, or the domain is degenerate).
struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A doubling search for a barrier or homotopy constant ran out of budget.
struct SearchExhaustedError : std::runtime_error {
    SearchExhaustedError(const std::string& msg, double worst_value, int worst_node)
        : std::runtime_error(msg), worst_value(worst_value), worst_node(worst_node) {}

    double worst_value;  // most negative margin seen at the last attempt
    int worst_node;      // node index where it occurred (-1 if not applicable)
};

/// The sparse factorization failed or the system is numerically singular.
struct SingularSystemError : std::runtime_error {
    explicit SingularSystemError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cmc

#endif
