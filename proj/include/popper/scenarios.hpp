#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "popper/oracle.hpp"

namespace popper {

/// Slit half-widths; s_L = 2a, s_R = 2b. An infinite b means the right slit
/// is absent.
struct SlitConfig {
    double left_half_width = 0.1;
    double right_half_width = std::numeric_limits<double>::infinity();

    bool right_infinite() const {
        return std::isinf(right_half_width);
    }
    void validate() const {
        if (!(left_half_width > 0.0))
            throw domain_error("SlitConfig: left half-width a must be > 0");
        if (!(right_half_width > 0.0))
            throw domain_error("SlitConfig: right half-width b must be > 0 or infinite");
    }
};

/// Half-width of the accepted k2 band. A sharply truncated wave packet has
/// |amplitude|^2 ~ 1/k2^2 tails, so the unrestricted momentum variance
/// diverges; a finite detector array regularizes it.
struct DetectorBand {
    double k_max = 0.0;

    void validate() const {
        if (!(k_max > 0.0)) throw domain_error("DetectorBand: k_max must be > 0");
    }
};

/// Default band: ten narrow-limit widths.
DetectorBand default_band(const PacketParams& p);

/// One grid cell of a sweep. Cells a method does not cover stay empty
/// (never zero); per-cell failures are recorded in flags instead of
/// aborting the sweep.
struct SweepRow {
    double a = 0.0;
    double b = std::numeric_limits<double>::infinity();
    double t = 0.0;
    double sigma_plus = 0.0;
    double sigma_minus = 0.0;
    double mass = 0.0;
    std::optional<double> dk2sq_narrow, dk2sq_small_a, dk2sq_wide;
    std::optional<double> dk2sq_quadrature, dk2sq_quadrature_err;
    std::optional<double> dk2sq_mc, dk2sq_mc_err;
    std::optional<double> dy2sq_narrow, dy2sq_small_a;
    std::optional<double> dy2sq_quadrature, dy2sq_quadrature_err;
    std::optional<double> dy2sq_mc, dy2sq_mc_err;
    bool expansion_valid = true;
    std::string flags;

    void add_flag(const std::string& f) {
        if (!flags.empty()) flags += ';';
        flags += f;
    }
};

struct CaseIiResult {
    std::vector<SweepRow> rows;
    /// Whether the quadrature column is non-increasing in a (1e-9 absolute
    /// slack for numerical noise).
    bool quadrature_monotone = false;
    std::string notes;
};

/// Narrow the left slit across `widths` with the right side open: quadrature
/// in every row, the small-a expansion with its trust flag, and the
/// narrow/wide closed-form limits attached as reference columns.
CaseIiResult run_case_ii(const std::vector<double>& widths, const PacketParams& p,
                         const QuadratureSpec& q = {});

struct CaseIResult {
    /// (i) y2 spread at the right-screen plane, left slit only.
    double dy2sq_left_slit = 0.0;
    /// (ii) band-limited k2 spread with a real right slit, b = a.
    double k2_spread_right_slit = 0.0;
    /// (iii) same with the right slit removed, b infinite.
    double k2_spread_right_open = 0.0;
    /// The quantum-mechanical direction: (ii) > (iii).
    bool right_slit_increases_spread = false;
    /// Set when the finite-b spread depends on the band cutoff.
    bool band_limited_warning = false;
};

CaseIResult run_case_i(double a, const PacketParams& p, const DetectorBand& band,
                       const QuadratureSpec& q = {});

/// Band-limited momentum spread of the right particle behind sharp apertures
/// |y1| <= a and |y2| <= b: the y2 dependence of the windowed position
/// amplitude is Fourier transformed numerically and the k2 variance taken
/// over |k2| <= k_max, normalized within the band. With finite b the result
/// grows with k_max (sharp-aperture tails); the warning flag on CaseIResult
/// and the returned expansion_valid field surface this.
SpreadEstimate post_slit_k2_spread(double a, double b, const DetectorBand& band,
                                   const PacketParams& p,
                                   const QuadratureSpec& q = {});

/// Cartesian sweep grid. Axes iterate lexicographically in the order
/// (a, b, t, sigma_plus, sigma_minus, mass).
struct GridSpec {
    std::vector<double> a{0.1};
    std::vector<double> b{std::numeric_limits<double>::infinity()};
    std::vector<double> t{0.0};
    std::vector<double> sigma_plus{1.0};
    std::vector<double> sigma_minus{3.0};
    std::vector<double> mass{1.0};

    void validate() const;
    std::size_t size() const {
        return a.size() * b.size() * t.size() * sigma_plus.size() *
               sigma_minus.size() * mass.size();
    }
};

struct MethodSet {
    bool closed_narrow = true;
    bool closed_small_a = true;
    bool closed_wide = true;
    bool quadrature = true;
    bool monte_carlo = false;

    bool any() const {
        return closed_narrow || closed_small_a || closed_wide || quadrature ||
               monte_carlo;
    }
};

/// Evaluate every requested method at every grid point. Rows come back in
/// grid order regardless of how many worker threads ran; per-cell errors
/// land in the row flags. Monte Carlo cells derive their seeds from
/// mc->seed and the cell index, so a sweep is reproducible as a whole.
std::vector<SweepRow> sweep(const GridSpec& grid, const MethodSet& methods,
                            const QuadratureSpec& q = {},
                            const std::optional<McSpec>& mc = std::nullopt,
                            int max_threads = 0);

} // namespace popper
