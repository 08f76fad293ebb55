#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "popper/errors.hpp"

namespace popper {

/// Controls for the adaptive integrators and for the truncation of the
/// formally infinite integration domains.
struct QuadratureSpec {
    double relative_tolerance = 1e-8;
    double absolute_tolerance = 1e-14;
    /// Half-width of the truncated domain, in units of the effective
    /// standard-deviation scale of the integrand.
    double domain_sigmas = 12.0;
    int max_subdivisions = 2000;

    void validate() const {
        if (!(relative_tolerance > 0.0))
            throw domain_error("QuadratureSpec: relative_tolerance must be > 0");
        if (!(absolute_tolerance > 0.0))
            throw domain_error("QuadratureSpec: absolute_tolerance must be > 0");
        if (!(domain_sigmas >= 8.0))
            throw domain_error("QuadratureSpec: domain_sigmas must be >= 8");
        if (max_subdivisions < 50)
            throw domain_error("QuadratureSpec: max_subdivisions must be >= 50");
    }
};

template <class T>
struct Integral {
    T value{};
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

namespace detail {

// Gauss-7 / Kronrod-15 pair on [-1, 1].
inline constexpr double gk15_x[8] = {
    0.00000000000000000000000000000000000e+00,
    2.07784955007898467600689403773244913e-01,
    4.05845151377397166906606412076961463e-01,
    5.86087235467691130294144838258729598e-01,
    7.41531185599394439863864773280788407e-01,
    8.64864423359769072789712788640926201e-01,
    9.49107912342758524526189684047851262e-01,
    9.91455371120812639206854697526328517e-01,
};
inline constexpr double gk15_wk[8] = {
    2.09482141084727828012999174891714264e-01,
    2.04432940075298892414161999234649085e-01,
    1.90350578064785409913256402421013683e-01,
    1.69004726639267902826583426598550284e-01,
    1.40653259715525918745189590510237920e-01,
    1.04790010322250183839876322541518017e-01,
    6.30920926299785532907006631892042867e-02,
    2.29353220105292249637320080589695920e-02,
};
// Gauss-7 weights, applied at the even-index Kronrod abscissas.
inline constexpr double gk15_wg[4] = {
    4.17959183673469387755102040816326531e-01,
    3.81830050505118944950369775488975134e-01,
    2.79705391489276667901467771423779582e-01,
    1.29484966168869693270611432679082018e-01,
};

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const std::complex<double>& v) { return std::abs(v); }

template <class F, class T>
void g7k15_panel(F& f, double a, double b, T& k15, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T k = gk15_wk[0] * fc;
    T g = gk15_wg[0] * fc;
    for (int i = 1; i < 8; ++i) {
        const double dx = h * gk15_x[i];
        T fsum = f(c - dx) + f(c + dx);
        k += gk15_wk[i] * fsum;
        if ((i & 1) == 0) g += gk15_wg[i / 2] * fsum;
    }
    k15 = k * h;
    const double diff = value_norm((k - g) * h);
    // QUADPACK-style sharpened estimate: Kronrod is far better than the
    // raw Gauss/Kronrod gap suggests.
    err = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
    if (err > 100.0 * diff) err = 100.0 * diff;
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [lo, hi].
/// Refines the largest-error panel first; deterministic for a given
/// integrand. Never throws on non-convergence: inspect .converged.
template <class F, class T = std::invoke_result_t<F, double>>
Integral<T> integrate(F&& f, double lo, double hi,
                      double rel_tol = 1e-10, double abs_tol = 1e-16,
                      int max_subdivisions = 2000, int initial_panels = 8) {
    struct Panel {
        double lo, hi, error;
        T value;
    };
    auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };

    std::vector<Panel> heap;
    heap.reserve(static_cast<std::size_t>(initial_panels) + 64);
    const double step = (hi - lo) / initial_panels;
    for (int i = 0; i < initial_panels; ++i) {
        Panel p;
        p.lo = lo + i * step;
        p.hi = (i + 1 == initial_panels) ? hi : lo + (i + 1) * step;
        detail::g7k15_panel(f, p.lo, p.hi, p.value, p.error);
        heap.push_back(p);
    }
    std::make_heap(heap.begin(), heap.end(), worse);

    auto totals = [&heap]() {
        // Canonical left-to-right summation, independent of heap layout.
        std::vector<const Panel*> order;
        order.reserve(heap.size());
        for (const Panel& p : heap) order.push_back(&p);
        std::sort(order.begin(), order.end(),
                  [](const Panel* a, const Panel* b) { return a->lo < b->lo; });
        T value{};
        double error = 0.0;
        for (const Panel* p : order) {
            value += p->value;
            error += p->error;
        }
        return std::pair<T, double>(value, error);
    };

    while (true) {
        auto [value, error] = totals();
        const double target =
            std::max(abs_tol, rel_tol * detail::value_norm(value));
        if (error <= target) {
            Integral<T> out;
            out.value = value;
            out.error = error;
            out.panels = static_cast<int>(heap.size());
            out.converged = true;
            return out;
        }
        if (static_cast<int>(heap.size()) >= max_subdivisions) {
            Integral<T> out;
            out.value = value;
            out.error = error;
            out.panels = static_cast<int>(heap.size());
            out.converged = false;
            return out;
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        Panel left{worst.lo, mid, 0.0, T{}};
        Panel right{mid, worst.hi, 0.0, T{}};
        detail::g7k15_panel(f, left.lo, left.hi, left.value, left.error);
        detail::g7k15_panel(f, right.lo, right.hi, right.value, right.error);
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
    }
}

} // namespace popper
