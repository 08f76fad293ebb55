#include "popper/verify.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "popper/oracle.hpp"
#include "popper/quadrature.hpp"
#include "popper/rng.hpp"
#include "popper/scenarios.hpp"

namespace popper {

namespace {

using cd = std::complex<double>;

struct Failure {
    std::string why;
};

#define VCHECK(cond, msg)                                   \
    do {                                                    \
        if (!(cond)) {                                      \
            std::ostringstream os_;                         \
            os_ << msg;                                     \
            throw Failure{os_.str()};                       \
        }                                                   \
    } while (0)

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

// Nested adaptive 2-D integral over [-wx, wx] x [-wy, wy].
template <class F>
double integrate2d(F&& f, double wx, double wy, double tol) {
    auto outer = [&](double y) {
        return integrate([&](double x) { return f(x, y); }, -wx, wx, 0.1 * tol,
                         1e-300, 4000)
            .value;
    };
    return integrate(outer, -wy, wy, tol, 1e-300, 4000).value;
}

double log_uniform(CounterRng& rng, double lo, double hi) {
    return lo * std::exp(rng.next_double() * std::log(hi / lo));
}

PacketParams random_params(CounterRng& rng) {
    PacketParams p;
    p.sigma_plus = log_uniform(rng, 1e-2, 1e2);
    p.sigma_minus = log_uniform(rng, 1e-2, 1e2);
    p.mass = log_uniform(rng, 1e-2, 1e2);
    p.time = rng.next_double() * 1e3;
    return p;
}

// Parameter sets kept in ranges where the 2-D quadratures stay cheap.
PacketParams random_mild_params(CounterRng& rng) {
    PacketParams p;
    p.sigma_plus = log_uniform(rng, 0.3, 3.0);
    p.sigma_minus = log_uniform(rng, 0.3, 6.0);
    p.mass = log_uniform(rng, 0.5, 2.0);
    p.time = rng.next_double() * 2.0;
    return p;
}

double momentum_norm(const PacketParams& p) {
    const double w =
        14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                 p.sigma_minus * p.sigma_minus));
    return integrate2d(
        [&](double k1, double k2) { return std::norm(psi_momentum(k1, k2, p)); },
        w, w, 1e-11);
}

double position_norm(const PacketParams& p) {
    const double w = 14.0 * effective_y1_width(p);
    return integrate2d(
        [&](double y1, double y2) { return std::norm(psi_position(y1, y2, p)); },
        w, w, 1e-11);
}

double mixed_norm(const PacketParams& p) {
    const double wy = 14.0 * effective_y1_width(p);
    const double wk =
        14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                 p.sigma_minus * p.sigma_minus));
    return integrate2d(
        [&](double y1, double k2) { return std::norm(psi_mixed(y1, k2, p)); },
        wy, wk, 1e-11);
}

// Numerical Fourier transform of the momentum amplitude over k1.
cd mixed_from_momentum(double y1, double k2, const PacketParams& p) {
    const double w =
        16.0 * std::sqrt(p.sigma_plus * p.sigma_plus + p.sigma_minus * p.sigma_minus) +
        2.0 * std::abs(k2);
    auto r = integrate(
        [&](double k1) {
            return std::exp(cd(0.0, k1 * y1)) * psi_momentum(k1, k2, p);
        },
        -w, w, 1e-11, 1e-300, 4000);
    return r.value / std::sqrt(2.0 * M_PI);
}

cd position_from_mixed(double y1, double y2, const PacketParams& p) {
    const double w =
        16.0 * std::sqrt(p.sigma_plus * p.sigma_plus + p.sigma_minus * p.sigma_minus);
    auto r = integrate(
        [&](double k2) {
            return std::exp(cd(0.0, k2 * y2)) * psi_mixed(y1, k2, p);
        },
        -w, w, 1e-11, 1e-300, 4000);
    return r.value / std::sqrt(2.0 * M_PI);
}

} // namespace

int run_verification(std::ostream& diag) {
    struct Check {
        const char* name;
        std::function<void()> fn;
    };
    std::vector<Check> checks;

    checks.push_back({"complex width: Re > 0 for all t, reduces to sigma^2 at t = 0", [] {
        CounterRng rng(11);
        for (int i = 0; i < 200; ++i) {
            const double sigma = log_uniform(rng, 1e-2, 1e2);
            const double m = log_uniform(rng, 1e-2, 1e2);
            const double t = rng.next_double() * 1e3;
            const ComplexWidthSq w = complex_width_sq(sigma, t, m);
            VCHECK(w.re > 0.0, "Re sigma(t)^2 <= 0");
            const ComplexWidthSq w0 = complex_width_sq(sigma, 0.0, m);
            VCHECK(w0.im == 0.0 && rel_diff(w0.re, sigma * sigma) < 1e-14,
                   "t = 0 does not reduce to sigma^2");
        }
    }});

    checks.push_back({"normalization: momentum, mixed, position to 1e-9", [] {
        CounterRng rng(12);
        for (int i = 0; i < 2; ++i) {
            const PacketParams p = random_mild_params(rng);
            VCHECK(std::abs(momentum_norm(p) - 1.0) < 1e-9,
                   "momentum norm off: " << momentum_norm(p));
            VCHECK(std::abs(position_norm(p) - 1.0) < 1e-9,
                   "position norm off: " << position_norm(p));
            VCHECK(std::abs(mixed_norm(p) - 1.0) < 1e-9,
                   "mixed norm off: " << mixed_norm(p));
        }
    }});

    checks.push_back({"Fourier consistency of the three representations", [] {
        const PacketParams p{0.5, 2.0, 1.0, 0.4};
        const cd direct = psi_mixed(0.3, 0.7, p);
        const cd ft = mixed_from_momentum(0.3, 0.7, p);
        VCHECK(std::abs(direct - ft) / std::abs(direct) < 1e-8,
               "mixed vs FT(momentum) mismatch");
        const PacketParams p2{0.3, 3.0, 1.0, 0.6};
        const cd direct2 = psi_position(0.2, -0.5, p2);
        const cd ft2 = position_from_mixed(0.2, -0.5, p2);
        VCHECK(std::abs(direct2 - ft2) / std::abs(direct2) < 1e-7,
               "position vs FT(mixed) mismatch");
    }});

    checks.push_back({"t = 0 marginal widths and Heisenberg minimum product", [] {
        const PacketParams p{0.8, 2.5, 1.3, 0.0};
        const double wk = 14.0 * std::sqrt(0.25 * (p.sigma_plus * p.sigma_plus +
                                                   p.sigma_minus * p.sigma_minus));
        const double sum_var = integrate2d(
            [&](double k1, double k2) {
                const double s = k1 + k2;
                return s * s * std::norm(psi_momentum(k1, k2, p));
            },
            wk, wk, 1e-11);
        VCHECK(rel_diff(std::sqrt(sum_var), p.sigma_plus) < 1e-8,
               "Delta(k1+k2) != sigma_plus");
        const double dif_var = integrate2d(
            [&](double k1, double k2) {
                const double s = k1 - k2;
                return s * s * std::norm(psi_momentum(k1, k2, p));
            },
            wk, wk, 1e-11);
        VCHECK(rel_diff(std::sqrt(dif_var), p.sigma_minus) < 1e-8,
               "Delta(k1-k2) != sigma_minus");
        const double wy = 14.0 * effective_y1_width(p);
        const double cm_var = integrate2d(
            [&](double y1, double y2) {
                const double c = 0.5 * (y1 + y2);
                return c * c * joint_position_density(y1, y2, p);
            },
            wy, wy, 1e-11);
        const double product = std::sqrt(sum_var) * std::sqrt(cm_var);
        VCHECK(std::abs(product - 0.5) < 1e-8,
               "Heisenberg product at t = 0 is " << product);
    }});

    checks.push_back({"delta(0) == delta_prime(0); sign of delta matches flip time", [] {
        CounterRng rng(13);
        for (int i = 0; i < 500; ++i) {
            PacketParams p = random_params(rng);
            PacketParams p0 = p;
            p0.time = 0.0;
            const ExpansionCoefficients c0 = delta_coeff(p0);
            VCHECK(rel_diff(c0.delta, c0.delta_prime) < 1e-12,
                   "delta(0) != delta_prime(0)");
            const ExpansionCoefficients c = delta_coeff(p);
            if (p.sigma_plus != p.sigma_minus) {
                const double expected =
                    p.time < c.sign_flip_time ? 1.0 : (p.time > c.sign_flip_time ? -1.0 : 0.0);
                if (expected > 0) VCHECK(c.delta > 0.0, "delta sign wrong below flip");
                if (expected < 0) VCHECK(c.delta < 0.0, "delta sign wrong above flip");
            } else {
                VCHECK(c.delta == 0.0, "delta != 0 for equal widths");
            }
        }
    }});

    checks.push_back({"delta_prime sign matches its negative t-interval", [] {
        CounterRng rng(14);
        for (int i = 0; i < 500; ++i) {
            const PacketParams p = random_params(rng);
            const double dp = delta_coeff(p).delta_prime;
            const auto band = delta_prime_negative_interval(p);
            if (!band) {
                VCHECK(std::abs(dp) < 1e-12, "delta_prime nonzero for equal widths");
                continue;
            }
            const bool inside = p.time > band->first && p.time < band->second;
            if (inside) VCHECK(dp < 1e-12, "delta_prime positive inside the band");
            else if (p.time < 0.999 * band->first || p.time > 1.001 * band->second)
                VCHECK(dp > -1e-12, "delta_prime negative outside the band");
        }
    }});

    checks.push_back({"wide <= narrow; narrow non-increasing in t; equal widths collapse", [] {
        CounterRng rng(15);
        for (int i = 0; i < 500; ++i) {
            const PacketParams p = random_params(rng);
            VCHECK(dk2sq_wide(p).value <= dk2sq_narrow(p).value * (1.0 + 1e-12),
                   "wide > narrow");
        }
        PacketParams p{1.0, 3.0, 1.0, 0.0};
        double prev = dk2sq_narrow(p).value;
        for (double t : {0.1, 0.3, 1.0, 3.0, 10.0, 100.0}) {
            p.time = t;
            const double cur = dk2sq_narrow(p).value;
            VCHECK(cur <= prev * (1.0 + 1e-12), "narrow not monotone in t");
            prev = cur;
        }
        for (double t : {0.0, 0.7, 5.0}) {
            const PacketParams eq{1.7, 1.7, 1.0, t};
            VCHECK(rel_diff(dk2sq_narrow(eq).value, 0.5 * 1.7 * 1.7) < 1e-12 &&
                       rel_diff(dk2sq_wide(eq).value, 0.5 * 1.7 * 1.7) < 1e-12,
                   "equal widths do not collapse to sigma^2/2");
        }
    }});

    checks.push_back({"small-a closed forms track the quadrature oracle", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.0};
        for (double a : {1e-3, 5e-3}) {
            const double q = dk2sq_quadrature(a, p).value;
            VCHECK(rel_diff(q, dk2sq_small_a(a, p).value) < 1e-6,
                   "dk2sq small-a vs quadrature at a = " << a);
            const double qy = dy2sq_quadrature(a, p).value;
            VCHECK(rel_diff(qy, dy2sq_small_a(a, p).value) < 1e-6,
                   "dy2sq small-a vs quadrature at a = " << a);
        }
    }});

    checks.push_back({"slit amplitude: closed form vs quadrature fallback", [] {
        CounterRng rng(16);
        for (int i = 0; i < 10; ++i) {
            PacketParams p = random_mild_params(rng);
            const double a = 0.05 + rng.next_double() * 2.0;
            const double k2 = (rng.next_double() - 0.5) * 4.0;
            const cd fast = slit_amplitude(k2, a, p, WindowEval::closed_form);
            const cd slow = slit_amplitude(k2, a, p, WindowEval::quadrature);
            VCHECK(std::abs(fast - slow) <= 1e-10 * std::abs(fast),
                   "slit amplitude route mismatch at k2 = " << k2);
            const double y2 = (rng.next_double() - 0.5) * 2.0;
            const cd pf = position_window_amplitude(y2, a, p, WindowEval::closed_form);
            const cd ps = position_window_amplitude(y2, a, p, WindowEval::quadrature);
            VCHECK(std::abs(pf - ps) <= 1e-10 * std::abs(pf),
                   "position window route mismatch at y2 = " << y2);
        }
    }});

    checks.push_back({"quadrature recovers the narrow- and wide-slit limits", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.0};
        const double eff = effective_y1_width(p);
        VCHECK(rel_diff(dk2sq_quadrature(1e-4 * eff, p).value,
                        dk2sq_narrow(p).value) < 1e-5,
               "narrow limit missed");
        VCHECK(rel_diff(dk2sq_quadrature(50.0 * eff, p).value,
                        dk2sq_wide(p).value) < 1e-4,
               "wide limit missed");
        VCHECK(rel_diff(dy2sq_quadrature(1e-5, p).value, dy2sq_narrow(p).value) <
                   1e-5,
               "position narrow limit missed");
    }});

    checks.push_back({"Monte Carlo concordance with quadrature (both modes)", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.3};
        McSpec mc;
        mc.sample_count = 200000;
        mc.seed = 77;
        mc.mode = McMode::momentum_spread;
        const SpreadEstimate m1 = mc_estimate(0.5, p, mc);
        const double q1 = dk2sq_quadrature(0.5, p).value;
        VCHECK(std::abs(m1.value - q1) <= 3.0 * m1.error_estimate,
               "momentum MC vs quadrature: " << m1.value << " vs " << q1);
        mc.mode = McMode::position_spread;
        const SpreadEstimate m2 = mc_estimate(0.4, p, mc);
        const double q2 = dy2sq_quadrature(0.4, p).value;
        VCHECK(std::abs(m2.value - q2) <= 3.0 * m2.error_estimate,
               "position MC vs quadrature: " << m2.value << " vs " << q2);
        const SpreadEstimate again = mc_estimate(0.4, p, mc);
        VCHECK(again.value == m2.value && again.error_estimate == m2.error_estimate,
               "same seed not bit-identical");
    }});

    checks.push_back({"coherent window differs from the incoherent marginal", [] {
        // Conditioning the probability instead of integrating the amplitude
        // is the classic mistake; the two must differ for unequal widths.
        const PacketParams p{1.0, 3.0, 1.0, 0.5};
        const double a = 0.4;
        const double coherent = dy2sq_quadrature(a, p).value;
        McSpec mc;
        mc.sample_count = 400000;
        mc.seed = 5;
        mc.mode = McMode::position_spread_incoherent;
        const SpreadEstimate inc = mc_estimate(a, p, mc);
        VCHECK(std::abs(inc.value - coherent) > 5.0 * inc.error_estimate,
               "coherent and incoherent spreads indistinguishable");
    }});

    checks.push_back({"coincidence denominator grows with the slit width", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.4};
        const double w = 12.0 * effective_k2_width(p);
        double prev = -1.0;
        for (double a : {0.1, 0.3, 0.9, 2.7}) {
            const double den =
                integrate([&](double k2) { return std::norm(slit_amplitude(k2, a, p)); },
                          -w, w, 1e-10, 1e-300, 4000)
                    .value;
            VCHECK(den > prev, "denominator not increasing at a = " << a);
            prev = den;
        }
    }});

    checks.push_back({"case (ii): monotone quadrature column inside the sandwich", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.1};
        std::vector<double> widths;
        for (int i = 0; i < 8; ++i)
            widths.push_back(0.01 * std::pow(5.0 / 0.01, i / 7.0));
        const CaseIiResult r = run_case_ii(widths, p);
        VCHECK(r.quadrature_monotone, "quadrature column not monotone");
        const double lo = dk2sq_wide(p).value;
        const double hi = dk2sq_narrow(p).value;
        for (const SweepRow& row : r.rows) {
            VCHECK(row.dk2sq_quadrature, "missing quadrature cell");
            VCHECK(*row.dk2sq_quadrature >= lo - 1e-9 &&
                       *row.dk2sq_quadrature <= hi + 1e-9,
                   "sandwich violated at a = " << row.a);
        }
    }});

    checks.push_back({"position spread never below its narrow limit at t = 0", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.0};
        const double v0 = dy2sq_narrow(p).value;
        for (double a : {0.05, 0.1, 0.2, 0.8, 3.0})
            VCHECK(dy2sq_quadrature(a, p).value >= v0 * (1.0 - 1e-9),
                   "dy2sq below the narrow limit at a = " << a);
    }});

    checks.push_back({"case (i): a real right slit widens the momentum spread", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.5};
        const CaseIResult r = run_case_i(0.3, p, DetectorBand{30.0});
        VCHECK(r.right_slit_increases_spread,
               "no increase: " << r.k2_spread_right_slit << " vs "
                               << r.k2_spread_right_open);
    }});

    checks.push_back({"removing the right slit reduces case (i) to case (ii) geometry", [] {
        const PacketParams p{1.0, 3.0, 1.0, 0.2};
        const DetectorBand band{25.0};
        const double open =
            post_slit_k2_spread(0.4, std::numeric_limits<double>::infinity(), band, p)
                .value;
        const double w = band.k_max;
        auto rho = [&](double k2) { return std::norm(slit_amplitude(k2, 0.4, p)); };
        const double num =
            integrate([&](double k2) { return k2 * k2 * rho(k2); }, -w, w, 1e-10,
                      1e-300, 4000)
                .value;
        const double den = integrate(rho, -w, w, 1e-10, 1e-300, 4000).value;
        VCHECK(rel_diff(open, num / den) < 1e-6, "b = inf branch mismatch");
    }});

    checks.push_back({"one-point sweep reproduces the single operations", [] {
        GridSpec grid;
        grid.a = {0.25};
        grid.t = {0.3};
        grid.sigma_plus = {1.0};
        grid.sigma_minus = {3.0};
        grid.mass = {1.0};
        MethodSet methods;
        const auto rows = sweep(grid, methods);
        VCHECK(rows.size() == 1, "unexpected row count");
        const PacketParams p{1.0, 3.0, 1.0, 0.3};
        VCHECK(rows[0].dk2sq_narrow && *rows[0].dk2sq_narrow == dk2sq_narrow(p).value,
               "narrow cell mismatch");
        VCHECK(rows[0].dk2sq_quadrature &&
                   *rows[0].dk2sq_quadrature == dk2sq_quadrature(0.25, p).value,
               "quadrature cell mismatch");
    }});

    int failures = 0;
    for (const Check& c : checks) {
        try {
            c.fn();
            diag << "ok   " << c.name << "\n";
        } catch (const Failure& f) {
            ++failures;
            diag << "FAIL " << c.name << ": " << f.why << "\n";
        } catch (const std::exception& e) {
            ++failures;
            diag << "FAIL " << c.name << ": unexpected error: " << e.what() << "\n";
        }
    }
    if (failures == 0)
        diag << "all " << checks.size() << " checks passed\n";
    else
        diag << failures << " of " << checks.size() << " checks failed\n";
    return failures;
}

} // namespace popper
