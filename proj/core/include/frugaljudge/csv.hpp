#pragma once

#include <string>

#include "frugaljudge/dataset.hpp"

namespace frugal {

/// Exact header line of the canonical CSV format (no trailing newline).
extern const char* const kCsvHeader;

/// Parses the canonical CSV format (strict: exact header, 17 integer/text
/// fields per row, no quoting). Throws ValidationError with row-level
/// diagnostics on malformed input.
Dataset parse_csv(const std::string& text);

Dataset load_csv_file(const std::string& path);

/// Canonical serialization. parse_csv(serialize_csv(d)) == d, and
/// serialize_csv(parse_csv(text)) == text for canonical-form text.
std::string serialize_csv(const Dataset& dataset);

}  // namespace frugal
