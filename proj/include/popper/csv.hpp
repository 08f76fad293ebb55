#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "popper/scenarios.hpp"

namespace popper {

/// Shortest decimal form that parses back to the same double ("inf", "-inf",
/// "nan" for the non-finite values).
std::string format_double(double v);

/// Fixed 20-column schema, header first, UTF-8 with LF line endings. Absent
/// cells are empty, an infinite b is the literal "inf".
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& out);

extern const char* const csv_header;

/// Parse-back of emit_csv output; numbers round-trip bit-exactly.
std::vector<SweepRow> parse_csv(std::istream& in);

} // namespace popper
