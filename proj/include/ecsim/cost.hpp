#pragma once

#include <stdexcept>
#include <string>

namespace ecsim {

enum class CostKind { solar, wind, consumer };

inline const char* to_string(CostKind kind) noexcept {
    switch (kind) {
        case CostKind::solar: return "solar";
        case CostKind::wind: return "wind";
        case CostKind::consumer: return "consumer";
    }
    return "?";
}

/// Convex polynomial cost of an agent's long-run activity share v in [0,1].
/// The three families share one quartic layout:
///   solar     f(v) = v + quad v^2 + quart v^4
///   wind      g(v) = v + quad v^2 + offset
///   consumer  h(v) = quad v^2 + quart v^4 + offset
/// Coefficients are nonnegative, so the derivative is nonnegative and
/// nondecreasing on [0,1].
struct CostFunction {
    CostKind kind = CostKind::solar;
    double lin = 0.0;     // degree-1 coefficient: 1 for prosumers, 0 for consumers
    double quad = 0.0;    // degree-2 coefficient
    double quart = 0.0;   // degree-4 coefficient
    double offset = 0.0;  // additive constant

    static CostFunction solar(double quad, double quart) {
        require_nonnegative(quad, quart, 0.0);
        return {CostKind::solar, 1.0, quad, quart, 0.0};
    }

    static CostFunction wind(double quad, double offset) {
        require_nonnegative(quad, 0.0, offset);
        return {CostKind::wind, 1.0, quad, 0.0, offset};
    }

    // Consumers have no linear term, so a strictly positive quad (or quart)
    // coefficient is required to keep the derivative nonzero on (0,1].
    static CostFunction consumer(double quad, double quart, double offset) {
        require_nonnegative(quad, quart, offset);
        if (quad <= 0.0 && quart <= 0.0)
            throw std::invalid_argument(
                "consumer cost needs quad > 0 or quart > 0; its derivative would vanish");
        return {CostKind::consumer, 0.0, quad, quart, offset};
    }

    double value(double v) const {
        check_domain(v);
        const double v2 = v * v;
        return lin * v + quad * v2 + quart * v2 * v2 + offset;
    }

    double derivative(double v) const {
        check_domain(v);
        return lin + 2.0 * quad * v + 4.0 * quart * v * v * v;
    }

    double second_derivative(double v) const {
        check_domain(v);
        return 2.0 * quad + 12.0 * quart * v * v;
    }

private:
    static void require_nonnegative(double quad, double quart, double offset) {
        if (quad < 0.0 || quart < 0.0 || offset < 0.0)
            throw std::invalid_argument("cost coefficients must be nonnegative");
    }

    static void check_domain(double v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::domain_error("cost argument " + std::to_string(v) + " outside [0,1]");
    }
};

} // namespace ecsim
