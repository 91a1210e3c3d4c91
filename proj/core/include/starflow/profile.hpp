#ifndef STARFLOW_PROFILE_HPP
#define STARFLOW_PROFILE_HPP

#include <cmath>
#include <numbers>

#include "starflow/errors.hpp"

namespace starflow {

namespace detail {
inline void require_profile_domain(double psi) {
    if (!(std::abs(psi) < std::numbers::pi / 2.0 - 1e-9)) {
        throw ValidationError("profile angle too close to pi/2: psi = " +
                              std::to_string(psi));
    }
}
} // namespace detail

/// f(psi) = psi sin(psi) + cos(psi) log(cos(psi)) on (-pi/2, pi/2).
/// Even, nonnegative, convex, bounded by pi/2; solves f'' + f = 1/cos(psi)
/// with f(0) = f'(0) = 0.
inline double f_profile(double psi) {
    detail::require_profile_domain(psi);
    const double c = std::cos(psi);
    return psi * std::sin(psi) + c * std::log(c);
}

inline double f_profile_prime(double psi) {
    detail::require_profile_domain(psi);
    const double c = std::cos(psi);
    return psi * c - std::sin(psi) * std::log(c);
}

inline double f_profile_second(double psi) {
    detail::require_profile_domain(psi);
    return 1.0 / std::cos(psi) - f_profile(psi);
}

} // namespace starflow

#endif
