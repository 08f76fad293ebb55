#include <doctest.h>

#include <cmath>
#include <complex>

#include "popper/cerf.hpp"
#include "popper/errors.hpp"
#include "popper/quadrature.hpp"

using namespace popper;
using cd = std::complex<double>;

namespace {

double rel(cd got, cd want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// 40-digit mpmath references.
struct Ref {
    double re_z, im_z, re_w, im_w;
};
constexpr Ref refs[] = {
    {1.0, 0.0, 0.84270079294971486934, 0.0},
    {0.5, 0.5, 0.64261291485482052832, 0.45788139443519221584},
    {2.0, 1.0, 1.0036063427256517509, -0.011259006028815025076},
    {-3.0, 2.0, -0.99896327885681726888, -0.000011546724379290603406},
    {5.0, -4.0, 1.0000106705918315981, -1.9162233374937266902e-6},
    {0.1, 3.0, 857.73642788747450969, 1365.1380099649577041},
    {7.0, 7.0, 1.010195303819281206, -0.056068649971793057978},
    {0.0, 5.0, 0.0, 8298273880.6768035161},
    {0.001, 0.002, 0.0011283833044904183014, 0.0022567590864395154101},
    {4.0, 25.0, -6.4047339319545074211e+262, 2.3376704994189812021e+262},
    {20.0, 20.0, 1.0189259784997887787, 0.0063003109798644004752},
    {1.0e-8, 1.0e-9, 1.128379167095512561e-8, 1.1283791670955125317e-9},
    {6.0, -6.0, 1.0576342401356785893, 0.033139114741156500492},
};

} // namespace

TEST_CASE("complex erf matches high-precision references to 1e-12") {
    for (const Ref& r : refs) {
        const cd got = complex_erf(cd(r.re_z, r.im_z));
        CHECK(rel(got, cd(r.re_w, r.im_w)) < 1e-12);
    }
}

TEST_CASE("erf(1) agrees with direct quadrature of the defining integral") {
    const auto q = integrate([](double s) { return std::exp(-s * s); }, 0.0, 1.0,
                             1e-14, 1e-18);
    REQUIRE(q.converged);
    const double expected = 2.0 / std::sqrt(M_PI) * q.value;
    CHECK(rel(complex_erf(cd(1.0, 0.0)), cd(expected, 0.0)) < 1e-13);
}

TEST_CASE("erf reflection symmetries on a grid") {
    CHECK(complex_erf(cd(0.0, 0.0)) == cd(0.0, 0.0));
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            const cd z(-4.0 + 0.9 * i, -4.0 + 0.9 * j);
            const cd w = complex_erf(z);
            CHECK(std::abs(complex_erf(-z) + w) <= 1e-14 * std::abs(w));
            const cd wc = complex_erf(std::conj(z));
            CHECK(std::abs(wc - std::conj(w)) <= 1e-14 * std::abs(w));
        }
    }
}

TEST_CASE("arguments outside the accuracy window are rejected") {
    CHECK_THROWS_AS(complex_erf(cd(31.0, 0.0)), erf_range_error);
    CHECK_THROWS_AS(complex_erf(cd(0.0, -30.5)), erf_range_error);
    CHECK_NOTHROW(complex_erf(cd(30.0, 5.0)));
}

TEST_CASE("faddeeva function basics") {
    // w(0) = 1; on the real axis (series region) Re w(x) = exp(-x^2) holds
    // componentwise because the pole correction carries the real part exactly.
    CHECK(rel(faddeeva_w(cd(0.0, 0.0)), cd(1.0, 0.0)) < 1e-14);
    for (double x : {0.3, 1.0, 2.7, 5.0, 7.5}) {
        const cd w = faddeeva_w(cd(x, 0.0));
        CHECK(std::abs(w.real() - std::exp(-x * x)) <=
              1e-13 * std::exp(-x * x) + 1e-15 * std::abs(w));
    }
}
