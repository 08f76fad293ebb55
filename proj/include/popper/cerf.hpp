#pragma once

#include <complex>

namespace popper {

/// Largest |Re z| and |Im z| accepted by complex_erf. Inside this window the
/// result is accurate to better than 1e-12 relative (in modulus) wherever it
/// is representable in double precision; |erf| overflows for
/// Im(z)^2 - Re(z)^2 > ~709.
inline constexpr double erf_accuracy_window = 30.0;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im(z) >= 0.
/// Interleaved trapezoidal sums with pole correction (Hunter & Regan style)
/// below |z| = 8, Laplace continued fraction beyond.
std::complex<double> faddeeva_w(std::complex<double> z);

/// Error function of a complex argument.
/// Throws erf_range_error when |Re z| or |Im z| exceeds erf_accuracy_window.
std::complex<double> complex_erf(std::complex<double> z);

} // namespace popper
