#include "popper/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "popper/errors.hpp"

namespace popper {

const char* const csv_header =
    "a,b,t,sigma_plus,sigma_minus,mass,"
    "dk2sq_narrow,dk2sq_small_a,dk2sq_wide,"
    "dk2sq_quadrature,dk2sq_quadrature_err,dk2sq_mc,dk2sq_mc_err,"
    "dy2sq_narrow,dy2sq_small_a,"
    "dy2sq_quadrature,dy2sq_quadrature_err,dy2sq_mc,dy2sq_mc_err,"
    "flags";

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::string sanitize_flags(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::optional<double> parse_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw io_error("parse_csv: bad numeric cell '" + s + "'");
    return v;
}

double parse_required(const std::string& s, const char* name) {
    auto v = parse_cell(s);
    if (!v) throw io_error(std::string("parse_csv: missing required cell ") + name);
    return *v;
}

} // namespace

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << csv_header << '\n';
    for (const SweepRow& r : rows) {
        out << format_double(r.a) << ',' << format_double(r.b) << ','
            << format_double(r.t) << ',' << format_double(r.sigma_plus) << ','
            << format_double(r.sigma_minus) << ',' << format_double(r.mass) << ','
            << cell(r.dk2sq_narrow) << ',' << cell(r.dk2sq_small_a) << ','
            << cell(r.dk2sq_wide) << ',' << cell(r.dk2sq_quadrature) << ','
            << cell(r.dk2sq_quadrature_err) << ',' << cell(r.dk2sq_mc) << ','
            << cell(r.dk2sq_mc_err) << ',' << cell(r.dy2sq_narrow) << ','
            << cell(r.dy2sq_small_a) << ',' << cell(r.dy2sq_quadrature) << ','
            << cell(r.dy2sq_quadrature_err) << ',' << cell(r.dy2sq_mc) << ','
            << cell(r.dy2sq_mc_err) << ',' << sanitize_flags(r.flags) << '\n';
        if (!out) throw io_error("emit_csv: write failed");
    }
    out.flush();
    if (!out) throw io_error("emit_csv: write failed");
}

std::vector<SweepRow> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw io_error("parse_csv: empty input");
    if (line != csv_header) throw io_error("parse_csv: unexpected header");
    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) cells.push_back(field);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (cells.size() != 20)
            throw io_error("parse_csv: expected 20 fields, got " +
                           std::to_string(cells.size()));
        SweepRow r;
        r.a = parse_required(cells[0], "a");
        r.b = parse_required(cells[1], "b");
        r.t = parse_required(cells[2], "t");
        r.sigma_plus = parse_required(cells[3], "sigma_plus");
        r.sigma_minus = parse_required(cells[4], "sigma_minus");
        r.mass = parse_required(cells[5], "mass");
        r.dk2sq_narrow = parse_cell(cells[6]);
        r.dk2sq_small_a = parse_cell(cells[7]);
        r.dk2sq_wide = parse_cell(cells[8]);
        r.dk2sq_quadrature = parse_cell(cells[9]);
        r.dk2sq_quadrature_err = parse_cell(cells[10]);
        r.dk2sq_mc = parse_cell(cells[11]);
        r.dk2sq_mc_err = parse_cell(cells[12]);
        r.dy2sq_narrow = parse_cell(cells[13]);
        r.dy2sq_small_a = parse_cell(cells[14]);
        r.dy2sq_quadrature = parse_cell(cells[15]);
        r.dy2sq_quadrature_err = parse_cell(cells[16]);
        r.dy2sq_mc = parse_cell(cells[17]);
        r.dy2sq_mc_err = parse_cell(cells[18]);
        r.flags = cells[19];
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace popper
