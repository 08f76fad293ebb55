#pragma once

#include <optional>
#include <utility>

#include "popper/packet.hpp"

namespace popper {

enum class SpreadMethod {
    closed_narrow,
    closed_small_a,
    closed_wide,
    quadrature,
    monte_carlo,
};

const char* to_string(SpreadMethod m);

/// A variance (momentum^2 or length^2) together with the route that produced
/// it. slit_half_width is 0 for the narrow-slit limit and +infinity for the
/// wide-slit limit; error_estimate is 0 for closed forms, a bound for
/// quadrature, a standard error for Monte Carlo.
struct SpreadEstimate {
    double value = 0.0;
    SpreadMethod method = SpreadMethod::closed_narrow;
    double error_estimate = 0.0;
    PacketParams params;
    double slit_half_width = 0.0;
    /// False when a small-width expansion was evaluated outside its regime
    /// (2 a^2 |coefficient| > 0.5). The value is still returned.
    bool expansion_valid = true;
};

/// Quadratic coefficients of the small-slit expansions:
///   momentum spread: dk2sq(a) = dk2sq(0) (1 - 2 a^2 delta)
///   position spread: dy2sq(a) = dy2sq(0) (1 + 2 a^2 delta_prime)
/// delta is positive for t below sign_flip_time, zero at it, negative
/// beyond; it vanishes identically for sigma_plus == sigma_minus.
struct ExpansionCoefficients {
    double delta = 0.0;
    double delta_prime = 0.0;
    double sign_flip_time = 0.0;
};

/// Conditioned momentum variance behind an infinitely narrow left slit.
/// Decreases from (sigma_plus^2 + sigma_minus^2)/4 at t = 0 towards the
/// wide-slit value as t -> infinity.
SpreadEstimate dk2sq_narrow(const PacketParams& p);

ExpansionCoefficients delta_coeff(const PacketParams& p);

SpreadEstimate dk2sq_small_a(double a, const PacketParams& p);

/// Fully open left slit; independent of t.
SpreadEstimate dk2sq_wide(const PacketParams& p);

/// Conditioned position variance of the right particle for a -> 0. The
/// companion limit for the left particle itself is exactly zero:
inline constexpr double dy1sq_narrow_limit = 0.0;
SpreadEstimate dy2sq_narrow(const PacketParams& p);

SpreadEstimate dy2sq_small_a(double a, const PacketParams& p);

/// Map the (Omega_0, sigma) parameterization onto PacketParams via
/// sigma_plus^2 = 1/(4 Omega_0^2), sigma_minus^2 = 4 sigma^2. Omega_0 is
/// treated as an inverse momentum and sigma as a momentum so that both
/// outputs keep momentum units; mass and time are passed through.
PacketParams from_qureshi(double omega0, double sigma, double mass, double time);

/// The t-interval on which delta_prime is negative, or nullopt when it is
/// non-negative for all t (exactly the sigma_plus == sigma_minus case).
/// delta_prime(t=0) is always >= 0, turns negative on this interval, and
/// recovers beyond it.
std::optional<std::pair<double, double>>
delta_prime_negative_interval(const PacketParams& p);

} // namespace popper
