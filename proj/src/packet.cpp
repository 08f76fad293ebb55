#include "popper/packet.hpp"

#include <cmath>

namespace popper {

namespace {

using cd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

struct Widths {
    cd sp;  // sigma_plus(t)^2
    cd sm;  // sigma_minus(t)^2
};

Widths widths(const PacketParams& p) {
    p.validate();
    const ComplexWidthSq a = complex_width_sq(p.sigma_plus, p.time, p.mass);
    const ComplexWidthSq b = complex_width_sq(p.sigma_minus, p.time, p.mass);
    return {a.value(), b.value()};
}

} // namespace

namespace detail {

cd sqrt_principal(cd z) {
    if (!(z.real() > 0.0))
        throw domain_error("sqrt_principal: radicand must have positive real part");
    return std::sqrt(z);
}

} // namespace detail

ComplexWidthSq complex_width_sq(double sigma, double t, double m) {
    if (!(sigma > 0.0)) throw domain_error("complex_width_sq: sigma must be > 0");
    if (!(m > 0.0)) throw domain_error("complex_width_sq: mass must be > 0");
    const cd inv(1.0 / (sigma * sigma), t / m);
    const cd s = 1.0 / inv;
    return {s.real(), s.imag()};
}

std::complex<double> psi_momentum(double k1, double k2, const PacketParams& p) {
    p.validate();
    // Exponent written with 1/sigma(t)^2 directly; no reciprocal round trip.
    const cd inv_sp(1.0 / (p.sigma_plus * p.sigma_plus), p.time / p.mass);
    const cd inv_sm(1.0 / (p.sigma_minus * p.sigma_minus), p.time / p.mass);
    const double ksum = k1 + k2;
    const double kdif = k1 - k2;
    const cd expo = -0.25 * (ksum * ksum * inv_sp + kdif * kdif * inv_sm);
    const double pref = 1.0 / std::sqrt(kPi * p.sigma_plus * p.sigma_minus);
    return pref * std::exp(expo);
}

std::complex<double> psi_mixed(double y1, double k2, const PacketParams& p) {
    const Widths w = widths(p);
    const cd S = w.sp + w.sm;
    const cd D = w.sp - w.sm;
    const cd pref = std::sqrt(2.0) / std::sqrt(kPi * p.sigma_plus * p.sigma_minus) *
                    detail::sqrt_principal(w.sp) * detail::sqrt_principal(w.sm) /
                    detail::sqrt_principal(S);
    const cd expo = -(w.sp * w.sm * y1 * y1 + k2 * k2 - cd(0.0, 1.0) * D * y1 * k2) / S;
    return pref * std::exp(expo);
}

std::complex<double> psi_position(double y1, double y2, const PacketParams& p) {
    const Widths w = widths(p);
    const cd S = w.sp + w.sm;
    const cd D = w.sp - w.sm;
    const cd pref = detail::sqrt_principal(w.sp) * detail::sqrt_principal(w.sm) /
                    std::sqrt(kPi * p.sigma_plus * p.sigma_minus);
    const cd expo = -0.25 * (S * (y1 * y1 + y2 * y2) + 2.0 * D * y1 * y2);
    return pref * std::exp(expo);
}

PositionPrecision position_precision(const PacketParams& p) {
    const Widths w = widths(p);
    return {0.5 * (w.sp.real() + w.sm.real()), 0.5 * (w.sp.real() - w.sm.real())};
}

double joint_position_density(double y1, double y2, const PacketParams& p) {
    return std::norm(psi_position(y1, y2, p));
}

} // namespace popper
