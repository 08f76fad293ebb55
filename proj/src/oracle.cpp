#include "popper/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "popper/cerf.hpp"
#include "popper/rng.hpp"

namespace popper {

namespace {

using cd = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kExpGuard = 700.0;  // exp() overflow guard on real parts

struct Geometry {
    cd sp, sm;   // complex squared widths
    cd S, D;     // sum and difference
    cd inv_S;
    double pref_mixed_scale;  // sqrt(2/(pi s+ s-)) factor of psi_mixed
    cd pref_mixed;
    cd pref_position;
};

Geometry geometry(const PacketParams& p) {
    p.validate();
    Geometry g;
    g.sp = complex_width_sq(p.sigma_plus, p.time, p.mass).value();
    g.sm = complex_width_sq(p.sigma_minus, p.time, p.mass).value();
    g.S = g.sp + g.sm;
    g.D = g.sp - g.sm;
    g.inv_S = 1.0 / g.S;
    const cd root_sp = detail::sqrt_principal(g.sp);
    const cd root_sm = detail::sqrt_principal(g.sm);
    const double norm = std::sqrt(kPi * p.sigma_plus * p.sigma_minus);
    g.pref_mixed = std::sqrt(2.0) / norm * root_sp * root_sm /
                   detail::sqrt_principal(g.S);
    g.pref_position = root_sp * root_sm / norm;
    g.pref_mixed_scale = 0.0;
    return g;
}

// Stable evaluation of  pref * int_{-a}^{a} exp(-A y^2 + B y + X) dy  through
// the Faddeeva function. X is a constant exponent folded in so that every
// exponential stays at the scale of the physical amplitude. Returns false if
// an argument leaves the complex_erf window or an exponent would overflow.
bool window_integral_closed(cd A, cd B, double a, cd X, cd pref, cd& out) {
    if (!(A.real() > 0.0))
        throw domain_error("window integral: Re(A) must be positive");
    const cd sqA = detail::sqrt_principal(A);
    const cd half_ratio = B / (2.0 * sqA);
    const cd edge = sqA * a;
    const cd u1 = edge - half_ratio;
    const cd u2 = edge + half_ratio;
    const double win = erf_accuracy_window;
    for (const cd& u : {u1, u2}) {
        if (std::abs(u.real()) > win || std::abs(u.imag()) > win) return false;
    }
    const cd E0 = X + half_ratio * half_ratio;  // X + B^2/(4A)
    const cd G1 = X + a * B - A * a * a;
    const cd G2 = X - a * B - A * a * a;
    if (E0.real() > kExpGuard || G1.real() > kExpGuard || G2.real() > kExpGuard)
        return false;

    const cd two_e0 = 2.0 * std::exp(E0);
    // exp(E0) erfc(u) evaluated as exp(G) w(iu), reflected when Re u < 0.
    auto scaled_erfc = [&](cd u, cd G) {
        if (u.real() >= 0.0)
            return std::exp(G) * faddeeva_w(cd(-u.imag(), u.real()));
        return two_e0 - std::exp(G) * faddeeva_w(cd(u.imag(), -u.real()));
    };
    const cd bracket = two_e0 - scaled_erfc(u1, G1) - scaled_erfc(u2, G2);
    out = pref * std::sqrt(kPi) / (2.0 * sqA) * bracket;
    return true;
}

template <class F>
cd window_integral_quadrature(F&& integrand, double a) {
    auto r = integrate(integrand, -a, a, 1e-12, 1e-300, 4000, 8);
    return r.value;
}

cd slit_amplitude_impl(double k2, double a, const PacketParams& p,
                       const Geometry& g, WindowEval eval) {
    if (!(a > 0.0)) throw domain_error("slit_amplitude: a must be > 0");
    const cd A = g.sp * g.sm * g.inv_S;
    const cd B = cd(0.0, 1.0) * g.D * k2 * g.inv_S;
    // Fold the Gaussian k2 prefactor into the exponent: combined with
    // B^2/(4A) it becomes -k2^2 S/(4 s+ s-), whose real part is
    // -(1/sigma_plus^2 + 1/sigma_minus^2) k2^2 / 4 -- always decaying.
    const cd X = -k2 * k2 * g.inv_S;
    if (eval != WindowEval::quadrature) {
        cd out;
        if (window_integral_closed(A, B, a, X, g.pref_mixed, out)) return out;
        if (eval == WindowEval::closed_form)
            throw erf_range_error(
                "slit_amplitude: closed form outside the complex_erf window");
    }
    return window_integral_quadrature(
        [&](double y1) { return psi_mixed(y1, k2, p); }, a);
}

cd position_window_impl(double y2, double a, const PacketParams& p,
                        const Geometry& g, WindowEval eval) {
    if (!(a > 0.0)) throw domain_error("position_window_amplitude: a must be > 0");
    const cd A = 0.25 * g.S;
    const cd B = -0.5 * g.D * y2;
    const cd X = -0.25 * g.S * y2 * y2;
    if (eval != WindowEval::quadrature) {
        cd out;
        if (window_integral_closed(A, B, a, X, g.pref_position, out)) return out;
        if (eval == WindowEval::closed_form)
            throw erf_range_error(
                "position_window_amplitude: closed form outside the complex_erf window");
    }
    return window_integral_quadrature(
        [&](double y1) { return psi_position(y1, y2, p); }, a);
}

struct RatioResult {
    double value;
    double error;
};

// Variance of a density given by |amplitude|^2 over [-w, w]:
// int x^2 rho / int rho, both adaptive.
template <class Density>
RatioResult density_variance(Density&& rho, double w, const QuadratureSpec& q,
                             const char* what) {
    auto den = integrate(rho, -w, w, q.relative_tolerance, q.absolute_tolerance,
                         q.max_subdivisions);
    auto num = integrate([&](double x) { return x * x * rho(x); }, -w, w,
                         q.relative_tolerance, q.absolute_tolerance,
                         q.max_subdivisions);
    const double value = num.value / den.value;
    const double error =
        std::abs(value) * (num.error / std::max(std::abs(num.value), 1e-300) +
                           den.error / std::max(std::abs(den.value), 1e-300));
    if (!num.converged || !den.converged)
        throw convergence_error(std::string(what) +
                                    ": subdivision budget exhausted before "
                                    "reaching the requested tolerance",
                                value, error);
    return {value, error};
}

SpreadEstimate spread(double value, double err, SpreadMethod m,
                      const PacketParams& p, double a) {
    SpreadEstimate e;
    e.value = value;
    e.method = m;
    e.error_estimate = err;
    e.params = p;
    e.slit_half_width = a;
    return e;
}

// ---- Monte Carlo helpers -------------------------------------------------

// Piecewise-linear tabulation of a nonnegative density, refined where linear
// interpolation misses, then sampled exactly by inverse CDF (per-panel
// quadratic solve).
class TabulatedDensity {
public:
    template <class F>
    TabulatedDensity(F&& f, double lo, double hi) {
        constexpr int kBase = 1025;
        xs_.reserve(kBase * 4);
        fs_.reserve(kBase * 4);
        for (int i = 0; i < kBase; ++i) {
            const double x = lo + (hi - lo) * i / (kBase - 1);
            xs_.push_back(x);
            fs_.push_back(f(x));
        }
        double fmax = 0.0;
        for (double v : fs_) fmax = std::max(fmax, v);
        const double tol = 1e-8 * fmax;
        for (int round = 0; round < 12; ++round) {
            std::vector<double> nx, nf;
            nx.reserve(xs_.size() * 2);
            nf.reserve(xs_.size() * 2);
            bool refined = false;
            for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
                nx.push_back(xs_[i]);
                nf.push_back(fs_[i]);
                const double xm = 0.5 * (xs_[i] + xs_[i + 1]);
                const double fm = f(xm);
                if (std::abs(fm - 0.5 * (fs_[i] + fs_[i + 1])) > tol &&
                    xs_.size() < 300000) {
                    nx.push_back(xm);
                    nf.push_back(fm);
                    refined = true;
                }
            }
            nx.push_back(xs_.back());
            nf.push_back(fs_.back());
            xs_.swap(nx);
            fs_.swap(nf);
            if (!refined) break;
        }
        cdf_.assign(xs_.size(), 0.0);
        for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
            cdf_[i + 1] = cdf_[i] + 0.5 * (fs_[i] + fs_[i + 1]) * (xs_[i + 1] - xs_[i]);
        total_ = cdf_.back();
        if (!(total_ > 0.0))
            throw statistics_error("tabulated density has zero mass");
    }

    double sample(double u) const {
        const double target = u * total_;
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), target);
        std::size_t i = it == cdf_.begin() ? 0 : (it - cdf_.begin()) - 1;
        i = std::min(i, cdf_.size() - 2);
        const double rest = target - cdf_[i];
        const double h = xs_[i + 1] - xs_[i];
        const double f0 = fs_[i];
        const double slope = (fs_[i + 1] - f0) / h;
        // Solve f0 t + slope t^2 / 2 = rest for t in [0, h].
        double t;
        if (std::abs(slope) * h < 1e-12 * std::max(f0, 1e-300)) {
            t = f0 > 0.0 ? rest / f0 : 0.5 * h;
        } else {
            const double disc = f0 * f0 + 2.0 * slope * rest;
            t = (-f0 + std::sqrt(std::max(disc, 0.0))) / slope;
        }
        return xs_[i] + std::clamp(t, 0.0, h);
    }

private:
    std::vector<double> xs_, fs_, cdf_;
    double total_ = 0.0;
};

struct VarianceStats {
    double variance;
    double jackknife_se;
};

// Sample variance (n-1 denominator) with its delete-one jackknife standard
// error, computable in closed form from the central power sums.
VarianceStats variance_with_jackknife(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double ss = 0.0, s4 = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        const double d2 = d * d;
        ss += d2;
        s4 += d2 * d2;
    }
    const double variance = ss / (n - 1.0);
    const double beta = n / ((n - 1.0) * (n - 2.0));
    const double spread4 = std::max(s4 - ss * ss / n, 0.0);
    const double se = std::sqrt((n - 1.0) / n * beta * beta * spread4);
    return {variance, se};
}

} // namespace

const char* to_string(McMode m) {
    switch (m) {
        case McMode::position_spread: return "position-spread";
        case McMode::momentum_spread: return "momentum-spread";
        case McMode::position_spread_incoherent: return "position-spread-incoherent";
    }
    return "unknown";
}

cd slit_amplitude(double k2, double a, const PacketParams& p, WindowEval eval) {
    return slit_amplitude_impl(k2, a, p, geometry(p), eval);
}

cd position_window_amplitude(double y2, double a, const PacketParams& p,
                             WindowEval eval) {
    return position_window_impl(y2, a, p, geometry(p), eval);
}

double effective_y1_width(const PacketParams& p) {
    const Geometry g = geometry(p);
    return std::sqrt(0.25 * (1.0 / g.sp.real() + 1.0 / g.sm.real()));
}

double effective_k2_width(const PacketParams& p) {
    return std::sqrt(dk2sq_narrow(p).value);
}

double dy2sq_open_limit(const PacketParams& p) {
    const Geometry g = geometry(p);
    const cd A = g.sp * g.sm * g.inv_S;
    return 1.0 / (4.0 * A.real());
}

double effective_y2_width(const PacketParams& p) {
    return std::sqrt(std::max(dy2sq_narrow(p).value, dy2sq_open_limit(p)));
}

SpreadEstimate dk2sq_quadrature(double a, const PacketParams& p,
                                const QuadratureSpec& q) {
    q.validate();
    if (!(a > 0.0)) throw domain_error("dk2sq_quadrature: a must be > 0");
    const Geometry g = geometry(p);
    const double w = q.domain_sigmas * effective_k2_width(p);
    auto rho = [&](double k2) {
        return std::norm(slit_amplitude_impl(k2, a, p, g, WindowEval::automatic));
    };
    const RatioResult r = density_variance(rho, w, q, "dk2sq_quadrature");
    return spread(r.value, r.error, SpreadMethod::quadrature, p, a);
}

SpreadEstimate dy2sq_quadrature(double a, const PacketParams& p,
                                const QuadratureSpec& q) {
    q.validate();
    if (!(a > 0.0)) throw domain_error("dy2sq_quadrature: a must be > 0");
    const Geometry g = geometry(p);
    const double w = q.domain_sigmas * effective_y2_width(p);
    auto rho = [&](double y2) {
        return std::norm(position_window_impl(y2, a, p, g, WindowEval::automatic));
    };
    const RatioResult r = density_variance(rho, w, q, "dy2sq_quadrature");
    return spread(r.value, r.error, SpreadMethod::quadrature, p, a);
}

SpreadEstimate mc_estimate(double a, const PacketParams& p, const McSpec& spec) {
    spec.validate();
    if (!(a > 0.0)) throw domain_error("mc_estimate: a must be > 0");
    const Geometry g = geometry(p);
    std::vector<double> samples;

    if (spec.mode == McMode::position_spread_incoherent) {
        // Exact bivariate Gaussian sampling from the exposed precision
        // coefficients, then post-selection on the slit window.
        const PositionPrecision prec = position_precision(p);
        const double var_y1 =
            prec.diag / (2.0 * (prec.diag * prec.diag - prec.off_diag * prec.off_diag));
        const double sd_y1 = std::sqrt(var_y1);
        const double cond_mean_coeff = -prec.off_diag / prec.diag;
        const double cond_sd = std::sqrt(0.5 / prec.diag);
        CounterRng rng(spec.seed);
        samples.reserve(static_cast<std::size_t>(spec.sample_count / 4));
        for (long long i = 0; i < spec.sample_count; ++i) {
            const double y1 = sd_y1 * rng.next_normal();
            const double y2 = cond_mean_coeff * y1 + cond_sd * rng.next_normal();
            if (std::abs(y1) <= a) samples.push_back(y2);
        }
        if (samples.size() < 100)
            throw statistics_error(
                "mc_estimate: fewer than 100 samples passed the slit window; "
                "increase a or sample_count");
    } else {
        const bool momentum = spec.mode == McMode::momentum_spread;
        const double w = (momentum ? effective_k2_width(p) : effective_y2_width(p)) *
                         QuadratureSpec{}.domain_sigmas;
        auto density = [&](double x) {
            return momentum
                       ? std::norm(slit_amplitude_impl(x, a, p, g, WindowEval::automatic))
                       : std::norm(position_window_impl(x, a, p, g, WindowEval::automatic));
        };
        const TabulatedDensity table(density, -w, w);
        CounterRng rng(spec.seed);
        samples.reserve(static_cast<std::size_t>(spec.sample_count));
        for (long long i = 0; i < spec.sample_count; ++i)
            samples.push_back(table.sample(rng.next_double()));
    }

    const VarianceStats stats = variance_with_jackknife(samples);
    return spread(stats.variance, stats.jackknife_se, SpreadMethod::monte_carlo, p, a);
}

} // namespace popper
