#include "popper/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "popper/csv.hpp"
#include "popper/verify.hpp"

namespace popper {

namespace {

double parse_value(const std::string& tok, bool allow_inf) {
    if (allow_inf && (tok == "inf" || tok == "infinity"))
        return std::numeric_limits<double>::infinity();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw domain_error("grid: bad number '" + tok + "'");
    return v;
}

struct CommonOpts {
    double sigma_plus = 1.0;
    double sigma_minus = 3.0;
    double mass = 1.0;
    double t = 0.0;
    double a = 0.1;
    std::string b = "inf";
    double k_max = 0.0;  // 0 = derive from the narrow-limit width
    std::string a_grid, b_grid, t_grid;
    std::string sigma_plus_grid, sigma_minus_grid, mass_grid;
    double rel_tol = 1e-8;
    double abs_tol = 1e-14;
    double domain_sigmas = 12.0;
    int max_subdivisions = 2000;
    long long mc_samples = 1000000;
    std::uint64_t seed = 0;
    bool with_mc = false;
    std::string output = "-";

    PacketParams params() const {
        PacketParams p{sigma_plus, sigma_minus, mass, t};
        p.validate();
        return p;
    }
    QuadratureSpec quad() const {
        QuadratureSpec q{rel_tol, abs_tol, domain_sigmas, max_subdivisions};
        q.validate();
        return q;
    }
    McSpec mc(McMode mode) const {
        McSpec m{mc_samples, seed, mode};
        m.validate();
        return m;
    }
    DetectorBand band(const PacketParams& p) const {
        if (k_max == 0.0) return default_band(p);
        DetectorBand b2{k_max};
        b2.validate();
        return b2;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--sigma-plus", o.sigma_plus, "total-momentum width sigma_+");
    cmd->add_option("--sigma-minus", o.sigma_minus, "relative-momentum width sigma_-");
    cmd->add_option("--mass", o.mass, "particle mass");
    cmd->add_option("--t", o.t, "evolution time");
    cmd->add_option("--a", o.a, "left slit half-width");
    cmd->add_option("--b", o.b, "right slit half-width or 'inf'");
    cmd->add_option("--k-max", o.k_max, "detector band half-width (0 = auto)");
    cmd->add_option("--a-grid", o.a_grid, "grid start:stop:lin|log:count");
    cmd->add_option("--b-grid", o.b_grid, "grid for b ('inf' allowed)");
    cmd->add_option("--t-grid", o.t_grid, "grid for t");
    cmd->add_option("--sigma-plus-grid", o.sigma_plus_grid, "grid for sigma_+");
    cmd->add_option("--sigma-minus-grid", o.sigma_minus_grid, "grid for sigma_-");
    cmd->add_option("--mass-grid", o.mass_grid, "grid for mass");
    cmd->add_option("--rel-tol", o.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--domain-sigmas", o.domain_sigmas, "integration window, in widths");
    cmd->add_option("--max-subdivisions", o.max_subdivisions, "quadrature panel budget");
    cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo sample count");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_flag("--with-mc", o.with_mc, "add Monte Carlo columns");
    cmd->add_option("-o,--output", o.output, "output path ('-' = stdout)");
}

void write_output(const std::string& path,
                  const std::function<void(std::ostream&)>& writer) {
    if (path == "-") {
        writer(std::cout);
        if (!std::cout) throw io_error("write to stdout failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + path);
    writer(out);
    if (!out) throw io_error("write failed: " + path);
}

constexpr const char* kPropensityLabel =
    "Popper propensity expectation (qualitative, no formula): no dispersion "
    "change from the remote slit";

int threads_from_env(const std::map<std::string, std::string>& env) {
    auto it = env.find("POPPER_THREADS");
    if (it == env.end()) return 0;
    int v = 0;
    const std::string& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0)
        throw domain_error("POPPER_THREADS must be a positive integer, got '" + s + "'");
    return v;
}

GridSpec build_grid(const CommonOpts& o) {
    GridSpec g;
    g.a = o.a_grid.empty() ? std::vector<double>{o.a} : parse_grid(o.a_grid);
    g.b = o.b_grid.empty() ? parse_grid(o.b, true) : parse_grid(o.b_grid, true);
    g.t = o.t_grid.empty() ? std::vector<double>{o.t} : parse_grid(o.t_grid);
    g.sigma_plus = o.sigma_plus_grid.empty() ? std::vector<double>{o.sigma_plus}
                                             : parse_grid(o.sigma_plus_grid);
    g.sigma_minus = o.sigma_minus_grid.empty() ? std::vector<double>{o.sigma_minus}
                                               : parse_grid(o.sigma_minus_grid);
    g.mass = o.mass_grid.empty() ? std::vector<double>{o.mass} : parse_grid(o.mass_grid);
    g.validate();
    return g;
}

// Single-point spread command; keep only the requested family's columns.
int run_spread(const CommonOpts& o, bool momentum) {
    const PacketParams p = o.params();
    const QuadratureSpec q = o.quad();
    GridSpec grid;
    grid.a = {o.a};
    grid.b = parse_grid(o.b, true);
    grid.t = {o.t};
    grid.sigma_plus = {o.sigma_plus};
    grid.sigma_minus = {o.sigma_minus};
    grid.mass = {o.mass};
    MethodSet methods;
    methods.monte_carlo = o.with_mc;
    std::optional<McSpec> mc;
    if (o.with_mc) mc = o.mc(McMode::momentum_spread);
    auto rows = sweep(grid, methods, q, mc, 1);
    for (SweepRow& row : rows) {
        if (momentum) {
            row.dy2sq_narrow.reset();
            row.dy2sq_small_a.reset();
            row.dy2sq_quadrature.reset();
            row.dy2sq_quadrature_err.reset();
            row.dy2sq_mc.reset();
            row.dy2sq_mc_err.reset();
        } else {
            row.dk2sq_narrow.reset();
            row.dk2sq_small_a.reset();
            row.dk2sq_wide.reset();
            row.dk2sq_quadrature.reset();
            row.dk2sq_quadrature_err.reset();
            row.dk2sq_mc.reset();
            row.dk2sq_mc_err.reset();
        }
        if (!row.flags.empty() &&
            row.flags.find("nonconverged") != std::string::npos)
            throw convergence_error("spread: " + row.flags, 0.0, 0.0);
    }
    write_output(o.output, [&](std::ostream& out) { emit_csv(rows, out); });
    (void)p;
    return 0;
}

// Expand a flat "key = value" config file into --key=value tokens for every
// key not already present on the command line. Grammar: one pair per line,
// '#' starts a comment, keys are the long option names without dashes.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;
    std::ifstream in(config_path);
    if (!in) throw io_error("cannot open config file: " + config_path);

    auto has_flag = [&](const std::string& key) {
        const std::string plain = "--" + key;
        for (const std::string& a : args)
            if (a == plain || a.rfind(plain + "=", 0) == 0) return true;
        return false;
    };

    std::vector<std::string> extended = args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw domain_error("config line " + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw domain_error("config line " + std::to_string(lineno) +
                               ": empty key or value");
        if (!has_flag(key)) extended.push_back("--" + key + "=" + value);
    }
    return extended;
}

} // namespace

std::vector<double> parse_grid(const std::string& spec, bool allow_inf) {
    std::vector<std::string> parts;
    std::string tok;
    std::istringstream s(spec);
    while (std::getline(s, tok, ':')) parts.push_back(tok);
    if (parts.size() == 1) return {parse_value(parts[0], allow_inf)};
    if (parts.size() != 4)
        throw domain_error("grid '" + spec + "': expected start:stop:lin|log:count");
    const double start = parse_value(parts[0], false);
    const double stop = parse_value(parts[1], false);
    const bool log_scale = parts[2] == "log";
    if (!log_scale && parts[2] != "lin")
        throw domain_error("grid '" + spec + "': scale must be lin or log");
    int count = 0;
    auto [p, ec] = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), count);
    if (ec != std::errc() || p != parts[3].data() + parts[3].size() || count < 1)
        throw domain_error("grid '" + spec + "': count must be a positive integer");
    if (log_scale && (!(start > 0.0) || !(stop > 0.0)))
        throw domain_error("grid '" + spec + "': log scale needs positive endpoints");
    if (count == 1) return {start};
    std::vector<double> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / (count - 1);
        out.push_back(log_scale ? start * std::exp(f * std::log(stop / start))
                                : start + f * (stop - start));
    }
    return out;
}

int run_cli(const std::vector<std::string>& args,
            const std::map<std::string, std::string>& env) {
    CLI::App app{"Conditioned spreads of an entangled Gaussian pair behind slits"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file")
        ->expected(1);

    CLI::App* spread_k2 = app.add_subcommand(
        "spread-k2", "momentum spread of the right particle for one slit width");
    CLI::App* spread_y2 = app.add_subcommand(
        "spread-y2", "position spread of the right particle for one slit width");
    CLI::App* case_i = app.add_subcommand(
        "case-i", "insert a real right slit and compare the band-limited spreads");
    CLI::App* case_ii =
        app.add_subcommand("case-ii", "narrow the left slit across a width grid");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "cartesian parameter sweep");
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run the full invariant suite");
    for (CLI::App* c : {spread_k2, spread_y2, case_i, case_ii, sweep_cmd})
        add_common(c, o);
    verify_cmd->add_option("-o,--output", o.output, "summary path ('-' = stdout)");

    try {
        std::vector<std::string> extended = apply_config(args);
        // CLI11 parses reversed argv.
        std::vector<std::string> rev(extended.rbegin(), extended.rend());
        app.parse(rev);

        const int threads = threads_from_env(env);

        if (*spread_k2) return run_spread(o, true);
        if (*spread_y2) return run_spread(o, false);

        if (*case_ii) {
            const PacketParams p = o.params();
            const QuadratureSpec q = o.quad();
            const std::vector<double> widths =
                o.a_grid.empty() ? parse_grid("0.01:5:log:20") : parse_grid(o.a_grid);
            const CaseIiResult r = run_case_ii(widths, p, q);
            write_output(o.output, [&](std::ostream& out) { emit_csv(r.rows, out); });
            std::cerr << "case-ii: quadrature column monotone non-increasing: "
                      << (r.quadrature_monotone ? "yes" : "no") << "\n";
            if (!r.notes.empty()) std::cerr << "case-ii: " << r.notes << "\n";
            std::cerr << "quantum mechanics: narrowing the left slit widens the "
                         "right-side momentum spread\n"
                      << kPropensityLabel << "\n";
            return 0;
        }

        if (*case_i) {
            const PacketParams p = o.params();
            const QuadratureSpec q = o.quad();
            const DetectorBand band = o.band(p);
            const CaseIResult r = run_case_i(o.a, p, band, q);
            write_output(o.output, [&](std::ostream& out) {
                out << "a = " << format_double(o.a) << ", b = " << format_double(o.a)
                    << " (real right slit) vs b = inf\n"
                    << "k_max = " << format_double(band.k_max) << "\n"
                    << "dy2sq_left_slit_only = " << format_double(r.dy2sq_left_slit)
                    << "\n"
                    << "k2_spread_right_slit = "
                    << format_double(r.k2_spread_right_slit) << "\n"
                    << "k2_spread_right_open = "
                    << format_double(r.k2_spread_right_open) << "\n"
                    << "right_slit_increases_spread = "
                    << (r.right_slit_increases_spread ? "true" : "false") << "\n"
                    << "quantum mechanics: the real right slit filters a narrower "
                       "packet and widens the momentum spread\n"
                    << kPropensityLabel << "\n";
            });
            if (r.band_limited_warning)
                std::cerr << "case-i: finite-aperture momentum variance grows with "
                             "k_max; values are band-limited\n";
            return 0;
        }

        if (*sweep_cmd) {
            const QuadratureSpec q = o.quad();
            const GridSpec grid = build_grid(o);
            MethodSet methods;
            methods.monte_carlo = o.with_mc;
            std::optional<McSpec> mc;
            if (o.with_mc) mc = o.mc(McMode::momentum_spread);
            const auto rows = sweep(grid, methods, q, mc, threads);
            write_output(o.output, [&](std::ostream& out) { emit_csv(rows, out); });
            return 0;
        }

        if (*verify_cmd) {
            const int failures = run_verification(std::cerr);
            if (failures == 0) {
                write_output(o.output,
                             [&](std::ostream& out) { out << "all checks passed\n"; });
                return 0;
            }
            std::cerr << "verification failed\n";
            return 2;
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends.
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const convergence_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace popper
