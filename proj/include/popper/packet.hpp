#pragma once

#include <complex>

#include "popper/errors.hpp"

namespace popper {

/// Physical state of the entangled pair, in natural units (hbar = 1, so
/// momentum and inverse length share a unit).
///
/// sigma_plus is the spread of the total vertical momentum k1 + k2 at the
/// decay time; sigma_minus the spread of the relative momentum k1 - k2.
/// Free evolution along the vertical axis is parameterized directly by the
/// time argument; no screen-distance mapping is implied.
struct PacketParams {
    double sigma_plus = 1.0;
    double sigma_minus = 1.0;
    double mass = 1.0;
    double time = 0.0;

    void validate() const {
        if (!(sigma_plus > 0.0))
            throw domain_error("PacketParams: sigma_plus must be > 0");
        if (!(sigma_minus > 0.0))
            throw domain_error("PacketParams: sigma_minus must be > 0");
        if (!(mass > 0.0)) throw domain_error("PacketParams: mass must be > 0");
        if (!(time >= 0.0)) throw domain_error("PacketParams: time must be >= 0");
    }

    /// Physically one expects sigma_minus >> sigma_plus; the formulas hold
    /// regardless, so an inverted ordering only warrants a warning.
    bool ordering_warning() const { return sigma_minus <= sigma_plus; }
};

/// Time-evolved complex squared width sigma(t)^2 = 1 / (1/sigma^2 + i t/m).
/// The real part is strictly positive for every finite t; at t = 0 the
/// imaginary part vanishes and re reduces to sigma^2.
struct ComplexWidthSq {
    double re = 0.0;
    double im = 0.0;
    std::complex<double> value() const { return {re, im}; }
};

ComplexWidthSq complex_width_sq(double sigma, double t, double m);

/// Two-particle momentum-space amplitude. Symmetric under k1 <-> k2;
/// |psi|^2 integrates to 1 over the (k1, k2) plane for every t.
std::complex<double> psi_momentum(double k1, double k2, const PacketParams& p);

/// Mixed-representation amplitude: position of the left particle, momentum
/// of the right one. All complex square roots take the principal branch;
/// every radicand has positive real part (checked).
std::complex<double> psi_mixed(double y1, double k2, const PacketParams& p);

/// Two-particle position-space amplitude. Symmetric under y1 <-> y2.
std::complex<double> psi_position(double y1, double y2, const PacketParams& p);

/// Coefficients of the joint position density
///   |psi(y1,y2)|^2 = N exp(-(diag (y1^2 + y2^2) + 2 off_diag y1 y2)).
/// Exposed so samplers need not re-derive them.
struct PositionPrecision {
    double diag = 0.0;
    double off_diag = 0.0;
};

PositionPrecision position_precision(const PacketParams& p);

/// |psi_position|^2, a bivariate Gaussian probability density.
double joint_position_density(double y1, double y2, const PacketParams& p);

namespace detail {
/// Principal square root, guarded: radicands in this codebase always have
/// positive real part (analytic continuation from t = 0).
std::complex<double> sqrt_principal(std::complex<double> z);
} // namespace detail

} // namespace popper
