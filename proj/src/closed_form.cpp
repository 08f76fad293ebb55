#include "popper/closed_form.hpp"

#include <cmath>
#include <limits>

namespace popper {

namespace {

struct Reduced {
    double p;   // sigma_plus^2
    double q;   // sigma_minus^2
    double x;   // p q tau^2,   tau = t/m
    double u2;  // p^2 tau^2
    double v2;  // q^2 tau^2
    double r2;  // (2 sigma_plus sigma_minus / (p + q))^2
};

Reduced reduce(const PacketParams& prm) {
    prm.validate();
    Reduced r;
    r.p = prm.sigma_plus * prm.sigma_plus;
    r.q = prm.sigma_minus * prm.sigma_minus;
    const double tau = prm.time / prm.mass;
    r.u2 = r.p * tau * (r.p * tau);
    r.v2 = r.q * tau * (r.q * tau);
    r.x = r.p * tau * (r.q * tau);
    const double s = r.p + r.q;
    r.r2 = 4.0 * r.p * r.q / (s * s);
    return r;
}

SpreadEstimate closed(double value, SpreadMethod m, const PacketParams& p,
                      double a, bool valid = true) {
    SpreadEstimate e;
    e.value = value;
    e.method = m;
    e.error_estimate = 0.0;
    e.params = p;
    e.slit_half_width = a;
    e.expansion_valid = valid;
    return e;
}

} // namespace

const char* to_string(SpreadMethod m) {
    switch (m) {
        case SpreadMethod::closed_narrow: return "closed-narrow";
        case SpreadMethod::closed_small_a: return "closed-small-a";
        case SpreadMethod::closed_wide: return "closed-wide";
        case SpreadMethod::quadrature: return "quadrature";
        case SpreadMethod::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

SpreadEstimate dk2sq_narrow(const PacketParams& prm) {
    const Reduced r = reduce(prm);
    const double value = 0.25 * (r.p + r.q) * (1.0 + r.r2 * r.x) / (1.0 + r.x);
    return closed(value, SpreadMethod::closed_narrow, prm, 0.0);
}

ExpansionCoefficients delta_coeff(const PacketParams& prm) {
    const Reduced r = reduce(prm);
    const double dif = r.p - r.q;
    ExpansionCoefficients c;
    c.delta = (dif * dif / (r.p + r.q)) / 12.0 / (1.0 + r.x) *
              (1.0 - r.r2 * r.x) / (1.0 + r.r2 * r.x);
    c.delta_prime = (r.p + r.q) / 12.0 *
                    (2.0 * (1.0 + r.x) / ((1.0 + r.u2) * (1.0 + r.v2)) -
                     (1.0 + r.r2) / (1.0 + r.x));
    c.sign_flip_time = prm.mass * (r.p + r.q) / (2.0 * r.p * r.q);
    return c;
}

SpreadEstimate dk2sq_small_a(double a, const PacketParams& prm) {
    if (!(a > 0.0)) throw domain_error("dk2sq_small_a: a must be > 0");
    const double narrow = dk2sq_narrow(prm).value;
    const double d = delta_coeff(prm).delta;
    const double corr = 2.0 * a * a * d;
    return closed(narrow * (1.0 - corr), SpreadMethod::closed_small_a, prm, a,
                  std::abs(corr) <= 0.5);
}

SpreadEstimate dk2sq_wide(const PacketParams& prm) {
    const Reduced r = reduce(prm);
    return closed(r.p * r.q / (r.p + r.q), SpreadMethod::closed_wide, prm,
                  std::numeric_limits<double>::infinity());
}

SpreadEstimate dy2sq_narrow(const PacketParams& prm) {
    const Reduced r = reduce(prm);
    const double value =
        (1.0 + r.u2) * (1.0 + r.v2) / ((r.p + r.q) * (1.0 + r.x));
    return closed(value, SpreadMethod::closed_narrow, prm, 0.0);
}

SpreadEstimate dy2sq_small_a(double a, const PacketParams& prm) {
    if (!(a > 0.0)) throw domain_error("dy2sq_small_a: a must be > 0");
    const double narrow = dy2sq_narrow(prm).value;
    const double dp = delta_coeff(prm).delta_prime;
    const double corr = 2.0 * a * a * dp;
    return closed(narrow * (1.0 + corr), SpreadMethod::closed_small_a, prm, a,
                  std::abs(corr) <= 0.5);
}

PacketParams from_qureshi(double omega0, double sigma, double mass, double time) {
    if (!(omega0 > 0.0)) throw domain_error("from_qureshi: omega0 must be > 0");
    if (!(sigma > 0.0)) throw domain_error("from_qureshi: sigma must be > 0");
    PacketParams p;
    p.sigma_plus = 1.0 / (2.0 * omega0);
    p.sigma_minus = 2.0 * sigma;
    p.mass = mass;
    p.time = time;
    p.validate();
    return p;
}

std::optional<std::pair<double, double>>
delta_prime_negative_interval(const PacketParams& prm) {
    const Reduced r = reduce(prm);
    if (r.p == r.q) return std::nullopt;
    // delta_prime is proportional to  p^2 q^2 x^2 - (p^2 + 4pq + q^2) x + 1
    // in x = tau^2; the discriminant (p+q)^2 (p^2 + 6pq + q^2) is always
    // positive, so two positive roots exist.
    const double lin = r.p * r.p + 4.0 * r.p * r.q + r.q * r.q;
    const double quad = r.p * r.p * r.q * r.q;
    const double sqrt_disc =
        (r.p + r.q) * std::sqrt(r.p * r.p + 6.0 * r.p * r.q + r.q * r.q);
    const double x_hi = (lin + sqrt_disc) / (2.0 * quad);
    const double x_lo = 1.0 / (quad * x_hi);  // product of roots = 1/quad
    return std::make_pair(prm.mass * std::sqrt(x_lo), prm.mass * std::sqrt(x_hi));
}

} // namespace popper
