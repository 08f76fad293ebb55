#pragma once

#include <complex>
#include <cstdint>

#include "popper/closed_form.hpp"
#include "popper/packet.hpp"
#include "popper/quadrature.hpp"

namespace popper {

enum class McMode {
    /// Sample y2 from the coherent slit-windowed position density
    /// |int_{-a}^{a} dy1 psi(y1, y2)|^2 by inverse-CDF tabulation.
    position_spread,
    /// Sample k2 from |slit_amplitude|^2 by inverse-CDF tabulation.
    momentum_spread,
    /// Sample (y1, y2) pairs from the joint position density and keep those
    /// with |y1| <= a. This conditions the probability, not the amplitude:
    /// it estimates the incoherent (projective) slit model, which matches
    /// the coherent one only as a -> 0.
    position_spread_incoherent,
};

const char* to_string(McMode m);

struct McSpec {
    long long sample_count = 1'000'000;
    std::uint64_t seed = 0;
    McMode mode = McMode::momentum_spread;

    void validate() const {
        if (sample_count < 1000)
            throw domain_error("McSpec: sample_count must be >= 1000");
    }
};

/// Evaluation route for the slit-window integrals: the analytic error
/// function form, adaptive quadrature, or the closed form with automatic
/// fallback when its arguments leave the complex_erf accuracy window.
enum class WindowEval { automatic, closed_form, quadrature };

/// Coherent amplitude for momentum k2 behind the left slit:
/// int_{-a}^{+a} dy1 psi_mixed(y1, k2).
std::complex<double> slit_amplitude(double k2, double a, const PacketParams& p,
                                    WindowEval eval = WindowEval::automatic);

/// Coherent amplitude at right-screen position y2 with the left particle
/// windowed: int_{-a}^{+a} dy1 psi_position(y1, y2).
std::complex<double> position_window_amplitude(double y2, double a,
                                               const PacketParams& p,
                                               WindowEval eval = WindowEval::automatic);

/// Brute-force conditioned momentum variance for arbitrary slit half-width:
/// ratio of the k2^2-weighted and plain integrals of |slit_amplitude|^2 over
/// a +-domain_sigmas window. Throws convergence_error (carrying the best
/// estimate) if the subdivision budget is exhausted.
SpreadEstimate dk2sq_quadrature(double a, const PacketParams& p,
                                const QuadratureSpec& q = {});

/// Brute-force conditioned position variance, same scheme in y2.
SpreadEstimate dy2sq_quadrature(double a, const PacketParams& p,
                                const QuadratureSpec& q = {});

/// Monte Carlo spread estimate; deterministic for a fixed (seed, spec).
/// error_estimate carries the delete-one jackknife standard error. In the
/// incoherent mode, fewer than 100 accepted samples raises statistics_error.
SpreadEstimate mc_estimate(double a, const PacketParams& p, const McSpec& spec);

/// Marginal y1 standard deviation of the joint position density; the scale
/// against which slit half-widths are narrow or wide.
double effective_y1_width(const PacketParams& p);

/// Largest closed-form k2 standard deviation (the narrow-slit limit).
double effective_k2_width(const PacketParams& p);

/// Conservative y2 scale: max of the narrow-limit and open-slit spreads.
double effective_y2_width(const PacketParams& p);

/// Open-slit (a -> infinity) position variance of the right particle.
double dy2sq_open_limit(const PacketParams& p);

} // namespace popper
