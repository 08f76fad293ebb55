#include <doctest.h>

#include <cmath>
#include <complex>

#include "popper/oracle.hpp"
#include "popper/packet.hpp"
#include "popper/quadrature.hpp"
#include "popper/rng.hpp"

using namespace popper;
using cd = std::complex<double>;

namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;

template <class F>
double integrate2d(F&& f, double wx, double wy, double tol) {
    auto outer = [&](double y) {
        return integrate([&](double x) { return f(x, y); }, -wx, wx, 0.1 * tol,
                         1e-300, 4000)
            .value;
    };
    return integrate(outer, -wy, wy, tol, 1e-300, 4000).value;
}

PacketParams mild_random(CounterRng& rng) {
    PacketParams p;
    p.sigma_plus = 0.3 * std::exp(rng.next_double() * std::log(10.0));
    p.sigma_minus = 0.3 * std::exp(rng.next_double() * std::log(20.0));
    p.mass = 0.5 + rng.next_double();
    p.time = rng.next_double() * 2.0;
    return p;
}

} // namespace

TEST_CASE("complex width: stated values") {
    const ComplexWidthSq w0 = complex_width_sq(1.0, 0.0, 1.0);
    CHECK(w0.re == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w0.im == 0.0);

    const ComplexWidthSq w1 = complex_width_sq(1.0, 1.0, 1.0);
    CHECK(w1.re == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w1.im == doctest::Approx(-0.5).epsilon(1e-15));

    // 1/(1/4 + 3i/5), 40-digit arithmetic reference
    const ComplexWidthSq w2 = complex_width_sq(2.0, 3.0, 5.0);
    CHECK(w2.re == doctest::Approx(0.59171597633136094675).epsilon(1e-15));
    CHECK(w2.im == doctest::Approx(-1.4201183431952662722).epsilon(1e-15));

    CHECK_THROWS_AS(complex_width_sq(-1.0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(complex_width_sq(1.0, 0.0, 0.0), domain_error);
}

TEST_CASE("complex width: positive real part across the parameter box") {
    CounterRng rng(3);
    for (int i = 0; i < 2000; ++i) {
        const double sigma = 1e-2 * std::exp(rng.next_double() * std::log(1e4));
        const double m = 1e-2 * std::exp(rng.next_double() * std::log(1e4));
        const double t = rng.next_double() * 1e3;
        CHECK(complex_width_sq(sigma, t, m).re > 0.0);
    }
}

TEST_CASE("parameter validation and the ordering warning") {
    PacketParams p{1.0, 3.0, 1.0, 0.0};
    CHECK_NOTHROW(p.validate());
    CHECK(!p.ordering_warning());
    CHECK(PacketParams{3.0, 1.0, 1.0, 0.0}.ordering_warning());
    CHECK(PacketParams{1.0, 1.0, 1.0, 0.0}.ordering_warning());
    CHECK_THROWS_AS((PacketParams{0.0, 1.0, 1.0, 0.0}.validate()), domain_error);
    CHECK_THROWS_AS((PacketParams{1.0, 1.0, 1.0, -0.1}.validate()), domain_error);
}

TEST_CASE("amplitudes at the origin and stated points") {
    const PacketParams unit{1.0, 1.0, 1.0, 0.0};
    CHECK(std::abs(psi_momentum(0, 0, unit) - cd(kInvSqrtPi, 0)) < 1e-15);
    CHECK(std::abs(psi_mixed(0, 0, unit) - cd(kInvSqrtPi, 0)) < 1e-15);
    CHECK(std::abs(psi_position(0, 0, unit) - cd(kInvSqrtPi, 0)) < 1e-15);
    CHECK(joint_position_density(0, 0, unit) ==
          doctest::Approx(1.0 / M_PI).epsilon(1e-14));

    // exp(-1)/sqrt(3 pi), 40-digit reference
    const PacketParams p13{1.0, 3.0, 1.0, 0.0};
    CHECK(std::abs(psi_momentum(1, 1, p13) - cd(0.11983121268920611733, 0)) <
          1e-15);
}

TEST_CASE("swap and parity symmetries") {
    CounterRng rng(4);
    for (int i = 0; i < 50; ++i) {
        const PacketParams p = mild_random(rng);
        const double k1 = (rng.next_double() - 0.5) * 6.0;
        const double k2 = (rng.next_double() - 0.5) * 6.0;
        CHECK(psi_momentum(k1, k2, p) == psi_momentum(k2, k1, p));
        const double y1 = (rng.next_double() - 0.5) * 4.0;
        const double y2 = (rng.next_double() - 0.5) * 4.0;
        CHECK(psi_position(y1, y2, p) == psi_position(y2, y1, p));
        // |psi_mixed| is even in y1 at k2 = 0 and even in k2 at y1 = 0
        CHECK(std::abs(psi_mixed(y1, 0.0, p)) ==
              doctest::Approx(std::abs(psi_mixed(-y1, 0.0, p))).epsilon(1e-14));
        CHECK(std::abs(psi_mixed(0.0, k2, p)) ==
              doctest::Approx(std::abs(psi_mixed(0.0, -k2, p))).epsilon(1e-14));
    }
}

TEST_CASE("momentum density is stationary and normalized") {
    CounterRng rng(5);
    for (int i = 0; i < 3; ++i) {
        PacketParams p = mild_random(rng);
        const double w = 14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                                  p.sigma_minus * p.sigma_minus));
        const double n = integrate2d(
            [&](double k1, double k2) { return std::norm(psi_momentum(k1, k2, p)); },
            w, w, 1e-11);
        CHECK(std::abs(n - 1.0) < 1e-9);
        // |psi(k1,k2;t)|^2 does not change under free evolution
        PacketParams p0 = p;
        p0.time = 0.0;
        CHECK(std::norm(psi_momentum(0.3, -0.8, p)) ==
              doctest::Approx(std::norm(psi_momentum(0.3, -0.8, p0))).epsilon(1e-12));
    }
}

TEST_CASE("position and mixed densities are normalized") {
    CounterRng rng(6);
    for (int i = 0; i < 2; ++i) {
        const PacketParams p = mild_random(rng);
        const double wy = 14.0 * effective_y1_width(p);
        const double wk = 14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                                   p.sigma_minus * p.sigma_minus));
        const double np = integrate2d(
            [&](double y1, double y2) { return joint_position_density(y1, y2, p); },
            wy, wy, 1e-11);
        CHECK(std::abs(np - 1.0) < 1e-9);
        const double nm = integrate2d(
            [&](double y1, double k2) { return std::norm(psi_mixed(y1, k2, p)); },
            wy, wk, 1e-11);
        CHECK(std::abs(nm - 1.0) < 1e-9);
    }
}

TEST_CASE("mixed representation equals the Fourier transform of the momentum one") {
    const PacketParams p{0.5, 2.0, 1.0, 0.4};
    const double y1 = 0.3, k2 = 0.7;
    const double w = 16.0 * std::sqrt(p.sigma_plus * p.sigma_plus +
                                      p.sigma_minus * p.sigma_minus);
    auto ft = integrate(
        [&](double k1) { return std::exp(cd(0, k1 * y1)) * psi_momentum(k1, k2, p); },
        -w, w, 1e-12, 1e-300, 4000);
    REQUIRE(ft.converged);
    const cd expected = ft.value / std::sqrt(2.0 * M_PI);
    const cd direct = psi_mixed(y1, k2, p);
    CHECK(std::abs(direct - expected) < 1e-8 * std::abs(expected));
}

TEST_CASE("position representation equals the double Fourier transform") {
    const PacketParams p{0.3, 3.0, 1.0, 0.6};
    const double y1 = 0.2, y2 = -0.5;
    const double w = 16.0 * std::sqrt(p.sigma_plus * p.sigma_plus +
                                      p.sigma_minus * p.sigma_minus);
    auto ft = integrate(
        [&](double k2) { return std::exp(cd(0, k2 * y2)) * psi_mixed(y1, k2, p); },
        -w, w, 1e-12, 1e-300, 4000);
    REQUIRE(ft.converged);
    const cd expected = ft.value / std::sqrt(2.0 * M_PI);
    const cd direct = psi_position(y1, y2, p);
    CHECK(std::abs(direct - expected) < 1e-7 * std::abs(expected));
}

TEST_CASE("position precision coefficients describe the density") {
    CounterRng rng(7);
    for (int i = 0; i < 20; ++i) {
        const PacketParams p = mild_random(rng);
        const PositionPrecision c = position_precision(p);
        const double y1 = (rng.next_double() - 0.5) * 2.0;
        const double y2 = (rng.next_double() - 0.5) * 2.0;
        const double expo = -(c.diag * (y1 * y1 + y2 * y2) + 2.0 * c.off_diag * y1 * y2);
        const double ratio = joint_position_density(y1, y2, p) /
                             joint_position_density(0.0, 0.0, p);
        CHECK(ratio == doctest::Approx(std::exp(expo)).epsilon(1e-12));
    }
    // equal widths at t = 0: factorized density, no cross term
    const PositionPrecision eq = position_precision(PacketParams{2.0, 2.0, 1.0, 0.0});
    CHECK(eq.off_diag == 0.0);
}

TEST_CASE("marginal widths and the Heisenberg product at t = 0") {
    const PacketParams p{0.8, 2.5, 1.3, 0.0};
    const double w = 14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                              p.sigma_minus * p.sigma_minus));
    const double sum_var = integrate2d(
        [&](double k1, double k2) {
            return (k1 + k2) * (k1 + k2) * std::norm(psi_momentum(k1, k2, p));
        },
        w, w, 1e-11);
    CHECK(std::abs(std::sqrt(sum_var) - p.sigma_plus) < 1e-8 * p.sigma_plus);
    const double dif_var = integrate2d(
        [&](double k1, double k2) {
            return (k1 - k2) * (k1 - k2) * std::norm(psi_momentum(k1, k2, p));
        },
        w, w, 1e-11);
    CHECK(std::abs(std::sqrt(dif_var) - p.sigma_minus) < 1e-8 * p.sigma_minus);

    const double wy = 14.0 * effective_y1_width(p);
    const double cm_var = integrate2d(
        [&](double y1, double y2) {
            const double c = 0.5 * (y1 + y2);
            return c * c * joint_position_density(y1, y2, p);
        },
        wy, wy, 1e-11);
    CHECK(std::abs(std::sqrt(sum_var) * std::sqrt(cm_var) - 0.5) < 1e-8);
}
