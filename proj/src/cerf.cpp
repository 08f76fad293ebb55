// Complex error function via the Faddeeva function.
//
// w(z) for |z| < 8 uses the trapezoidal sum of the defining integral with the
// residue correction term (Chiarella & Reichel; Hunter & Regan). Two node
// lattices, integer and half-integer, are interleaved so that the lattice
// farther from Re(z) can always be chosen; this keeps the pole/correction
// cancellation harmless near the real axis. For |z| >= 8 the Laplace
// continued fraction converges to machine precision in ~24 terms.

#include "popper/cerf.hpp"

#include <cassert>
#include <cmath>

#include "popper/errors.hpp"

namespace popper {

namespace {

using cd = std::complex<double>;

constexpr double kH = 0.29;
constexpr int kN = 26;
constexpr double kInvSqrtPi = 0.5641895835477562869480794515607726;

// exp(-t^2) at the half-integer nodes (j+1/2)h and integer nodes j*h.
struct NodeTables {
    double mid[kN];
    double integer[kN + 1];
    NodeTables() {
        for (int j = 0; j < kN; ++j) {
            const double t = (j + 0.5) * kH;
            mid[j] = std::exp(-t * t);
        }
        for (int j = 0; j <= kN; ++j) {
            const double t = j * kH;
            integer[j] = std::exp(-t * t);
        }
    }
};
const NodeTables tables;

cd w_continued_fraction(cd z) {
    cd r = 0.0;
    for (int k = 24; k >= 1; --k) r = (0.5 * k) / (z - r);
    return cd(0.0, kInvSqrtPi) / (z - r);
}

cd w_trapezoid_mid(cd z) {
    const cd z2 = z * z;
    cd s = 0.0;
    for (int j = kN - 1; j >= 0; --j) {
        const double t = (j + 0.5) * kH;
        s += tables.mid[j] * 2.0 * z / (z2 - t * t);
    }
    s *= cd(0.0, kH / M_PI);
    return s + 2.0 * std::exp(-z2) / (1.0 + std::exp(cd(0.0, -2.0 * M_PI / kH) * z));
}

cd w_trapezoid_int(cd z) {
    const cd z2 = z * z;
    cd s = 1.0 / z;
    for (int j = kN; j >= 1; --j) {
        const double t = j * kH;
        s += tables.integer[j] * 2.0 * z / (z2 - t * t);
    }
    s *= cd(0.0, kH / M_PI);
    return s + 2.0 * std::exp(-z2) / (1.0 - std::exp(cd(0.0, -2.0 * M_PI / kH) * z));
}

// Maclaurin series of erf; componentwise stable for small |z|.
cd erf_series(cd z) {
    const cd z2 = z * z;
    cd term = z;
    cd sum = z;
    for (int n = 1; n < 40; ++n) {
        term *= -z2 / static_cast<double>(n);
        const cd add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return sum * (2.0 * kInvSqrtPi);
}

} // namespace

cd faddeeva_w(cd z) {
    assert(z.imag() >= 0.0);
    if (std::norm(z) >= 64.0) return w_continued_fraction(z);
    if (z.imag() >= 0.5 * kH) return w_trapezoid_mid(z);
    // Near the real axis pick the lattice whose nodes are farther from Re z.
    const double rho = z.real() / kH;
    const double frac = rho - std::floor(rho);
    const double dist_int = std::min(frac, 1.0 - frac);
    const double dist_mid = std::abs(frac - 0.5);
    return dist_mid >= dist_int ? w_trapezoid_mid(z) : w_trapezoid_int(z);
}

cd complex_erf(cd z) {
    if (std::abs(z.real()) > erf_accuracy_window ||
        std::abs(z.imag()) > erf_accuracy_window)
        throw erf_range_error("complex_erf: |Re z| and |Im z| must be <= 30");
    if (std::norm(z) <= 6.25) return erf_series(z);
    // erf(z) = 1 - exp(-z^2) w(iz), valid for Re z >= 0; erf is odd.
    const bool flip = z.real() < 0.0;
    if (flip) z = -z;
    const cd value = 1.0 - std::exp(-z * z) * faddeeva_w(cd(-z.imag(), z.real()));
    return flip ? -value : value;
}

} // namespace popper
