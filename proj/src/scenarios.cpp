#include "popper/scenarios.hpp"

#include <cmath>
#include <thread>

namespace popper {

namespace {

using cd = std::complex<double>;

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438187;

SweepRow base_row(double a, double b, const PacketParams& p) {
    SweepRow row;
    row.a = a;
    row.b = b;
    row.t = p.time;
    row.sigma_plus = p.sigma_plus;
    row.sigma_minus = p.sigma_minus;
    row.mass = p.mass;
    return row;
}

void fill_closed_forms(SweepRow& row, const PacketParams& p, const MethodSet& m) {
    if (m.closed_narrow) {
        row.dk2sq_narrow = dk2sq_narrow(p).value;
        row.dy2sq_narrow = dy2sq_narrow(p).value;
    }
    if (m.closed_small_a) {
        const SpreadEstimate k = dk2sq_small_a(row.a, p);
        const SpreadEstimate y = dy2sq_small_a(row.a, p);
        row.dk2sq_small_a = k.value;
        row.dy2sq_small_a = y.value;
        row.expansion_valid = k.expansion_valid && y.expansion_valid;
        if (!row.expansion_valid) row.add_flag("small-a-out-of-regime");
    }
    if (m.closed_wide) row.dk2sq_wide = dk2sq_wide(p).value;
}

void fill_cell(SweepRow& row, const PacketParams& p, const MethodSet& methods,
               const QuadratureSpec& q, const std::optional<McSpec>& mc,
               std::size_t cell_index) {
    fill_closed_forms(row, p, methods);
    if (methods.quadrature) {
        try {
            const SpreadEstimate e = dk2sq_quadrature(row.a, p, q);
            row.dk2sq_quadrature = e.value;
            row.dk2sq_quadrature_err = e.error_estimate;
        } catch (const convergence_error& e) {
            row.add_flag(std::string("dk2sq-quadrature-nonconverged:") + e.what());
        }
        try {
            const SpreadEstimate e = dy2sq_quadrature(row.a, p, q);
            row.dy2sq_quadrature = e.value;
            row.dy2sq_quadrature_err = e.error_estimate;
        } catch (const convergence_error& e) {
            row.add_flag(std::string("dy2sq-quadrature-nonconverged:") + e.what());
        }
    }
    if (methods.monte_carlo && mc) {
        McSpec cell = *mc;
        try {
            cell.mode = McMode::momentum_spread;
            cell.seed = mc->seed + 2 * cell_index;
            const SpreadEstimate e = mc_estimate(row.a, p, cell);
            row.dk2sq_mc = e.value;
            row.dk2sq_mc_err = e.error_estimate;
        } catch (const statistics_error& e) {
            row.add_flag(std::string("dk2sq-mc-failed:") + e.what());
        }
        try {
            cell.mode = McMode::position_spread;
            cell.seed = mc->seed + 2 * cell_index + 1;
            const SpreadEstimate e = mc_estimate(row.a, p, cell);
            row.dy2sq_mc = e.value;
            row.dy2sq_mc_err = e.error_estimate;
        } catch (const statistics_error& e) {
            row.add_flag(std::string("dy2sq-mc-failed:") + e.what());
        }
    }
}

} // namespace

DetectorBand default_band(const PacketParams& p) {
    return DetectorBand{10.0 * std::sqrt(dk2sq_narrow(p).value)};
}

void GridSpec::validate() const {
    if (a.empty() || b.empty() || t.empty() || sigma_plus.empty() ||
        sigma_minus.empty() || mass.empty())
        throw domain_error("GridSpec: every axis needs at least one value");
    for (double v : a)
        if (!(v > 0.0)) throw domain_error("GridSpec: a values must be > 0");
    for (double v : b)
        if (!(v > 0.0)) throw domain_error("GridSpec: b values must be > 0 or inf");
    for (double v : t)
        if (!(v >= 0.0)) throw domain_error("GridSpec: t values must be >= 0");
    for (double v : sigma_plus)
        if (!(v > 0.0)) throw domain_error("GridSpec: sigma_plus values must be > 0");
    for (double v : sigma_minus)
        if (!(v > 0.0)) throw domain_error("GridSpec: sigma_minus values must be > 0");
    for (double v : mass)
        if (!(v > 0.0)) throw domain_error("GridSpec: mass values must be > 0");
}

CaseIiResult run_case_ii(const std::vector<double>& widths, const PacketParams& p,
                         const QuadratureSpec& q) {
    p.validate();
    if (widths.empty()) throw domain_error("run_case_ii: widths must be non-empty");
    for (std::size_t i = 0; i + 1 < widths.size(); ++i)
        if (!(widths[i] < widths[i + 1]))
            throw domain_error("run_case_ii: widths must be strictly increasing");

    MethodSet methods;
    methods.monte_carlo = false;
    CaseIiResult result;
    result.rows.reserve(widths.size());
    for (double a : widths) {
        SweepRow row = base_row(a, std::numeric_limits<double>::infinity(), p);
        fill_cell(row, p, methods, q, std::nullopt, result.rows.size());
        result.rows.push_back(std::move(row));
    }

    result.quadrature_monotone = true;
    std::optional<double> prev;
    for (const SweepRow& row : result.rows) {
        if (!row.dk2sq_quadrature) continue;
        if (prev && *row.dk2sq_quadrature > *prev + 1e-9)
            result.quadrature_monotone = false;
        prev = row.dk2sq_quadrature;
    }

    const ExpansionCoefficients coeff = delta_coeff(p);
    if (p.time > coeff.sign_flip_time)
        result.notes =
            "t beyond the delta sign flip: the small-a slope is inverted "
            "(spread grows with a near a = 0)";
    return result;
}

SpreadEstimate post_slit_k2_spread(double a, double b, const DetectorBand& band,
                                   const PacketParams& p, const QuadratureSpec& q) {
    q.validate();
    band.validate();
    SlitConfig slits{a, b};
    slits.validate();

    if (std::isinf(b)) {
        // No right slit: the y2 transform of the windowed amplitude is
        // exactly the mixed-representation slit amplitude.
        auto rho = [&](double k2) { return std::norm(slit_amplitude(k2, a, p)); };
        auto den = integrate(rho, -band.k_max, band.k_max, q.relative_tolerance,
                             q.absolute_tolerance, q.max_subdivisions);
        auto num = integrate([&](double k2) { return k2 * k2 * rho(k2); },
                             -band.k_max, band.k_max, q.relative_tolerance,
                             q.absolute_tolerance, q.max_subdivisions);
        if (!num.converged || !den.converged)
            throw convergence_error("post_slit_k2_spread: budget exhausted",
                                    num.value / den.value, 0.0);
        SpreadEstimate e;
        e.value = num.value / den.value;
        e.method = SpreadMethod::quadrature;
        e.error_estimate =
            std::abs(e.value) * (num.error / std::abs(num.value) +
                                 den.error / std::abs(den.value));
        e.params = p;
        e.slit_half_width = a;
        return e;
    }

    // Sharp aperture at |y2| <= b, then a numerical Fourier transform of the
    // y2 dependence. The inner tolerance is tightened below the outer one.
    auto transformed = [&](double k2) {
        auto integrand = [&](double y2) {
            return std::exp(cd(0.0, -k2 * y2)) * position_window_amplitude(y2, a, p);
        };
        auto r = integrate(integrand, -b, b, 0.05 * q.relative_tolerance,
                           q.absolute_tolerance, q.max_subdivisions);
        return kInvSqrt2Pi * r.value;
    };
    auto rho = [&](double k2) { return std::norm(transformed(k2)); };
    auto den = integrate(rho, -band.k_max, band.k_max, q.relative_tolerance,
                         q.absolute_tolerance, q.max_subdivisions);
    auto num = integrate([&](double k2) { return k2 * k2 * rho(k2); },
                         -band.k_max, band.k_max, q.relative_tolerance,
                         q.absolute_tolerance, q.max_subdivisions);
    const double value = num.value / den.value;
    if (!num.converged || !den.converged)
        throw convergence_error("post_slit_k2_spread: budget exhausted", value, 0.0);
    SpreadEstimate e;
    e.value = value;
    e.method = SpreadMethod::quadrature;
    e.error_estimate = std::abs(value) * (num.error / std::abs(num.value) +
                                          den.error / std::abs(den.value));
    e.params = p;
    e.slit_half_width = a;
    // The band-limited variance of a sharply truncated packet grows with
    // k_max; flag rather than pretend convergence in the band limit.
    e.expansion_valid = false;
    return e;
}

CaseIResult run_case_i(double a, const PacketParams& p, const DetectorBand& band,
                       const QuadratureSpec& q) {
    if (!(a > 0.0)) throw domain_error("run_case_i: a must be > 0");
    CaseIResult r;
    r.dy2sq_left_slit = dy2sq_quadrature(a, p, q).value;
    r.k2_spread_right_slit =
        post_slit_k2_spread(a, a, band, p, q).value;
    r.k2_spread_right_open =
        post_slit_k2_spread(a, std::numeric_limits<double>::infinity(), band, p, q)
            .value;
    r.right_slit_increases_spread = r.k2_spread_right_slit > r.k2_spread_right_open;
    r.band_limited_warning = true;
    return r;
}

std::vector<SweepRow> sweep(const GridSpec& grid, const MethodSet& methods,
                            const QuadratureSpec& q, const std::optional<McSpec>& mc,
                            int max_threads) {
    grid.validate();
    q.validate();
    if (!methods.any()) throw domain_error("sweep: no methods requested");
    if (methods.monte_carlo && !mc)
        throw domain_error("sweep: monte_carlo requested without an McSpec");
    if (mc) mc->validate();

    struct Cell {
        SweepRow row;
        PacketParams params;
    };
    std::vector<Cell> cells;
    cells.reserve(grid.size());
    for (double a : grid.a)
        for (double b : grid.b)
            for (double t : grid.t)
                for (double sp : grid.sigma_plus)
                    for (double sm : grid.sigma_minus)
                        for (double m : grid.mass) {
                            PacketParams p{sp, sm, m, t};
                            p.validate();
                            cells.push_back({base_row(a, b, p), p});
                        }

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    std::size_t workers = max_threads > 0 ? static_cast<std::size_t>(max_threads) : hw;
    workers = std::min(workers, cells.size());
    workers = std::max<std::size_t>(workers, 1);

    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < cells.size(); i += workers) {
            try {
                fill_cell(cells[i].row, cells[i].params, methods, q, mc, i);
            } catch (const std::exception& e) {
                cells[i].row.add_flag(std::string("cell-failed:") + e.what());
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& t : pool) t.join();
    }

    std::vector<SweepRow> rows;
    rows.reserve(cells.size());
    for (Cell& c : cells) rows.push_back(std::move(c.row));
    return rows;
}

} // namespace popper
