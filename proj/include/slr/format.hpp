#pragma once

#include <string>

namespace slr {

/// Fixed numeric formatting for every exported value: 12 significant digits,
/// "nan"/"inf" spelled out.
std::string format_number(double value);

/// Shortest form that parses back to the identical double (17 digits).
std::string format_exact(double value);

/// Value after a round trip through format_number; JSON exports use it so they
/// carry the same numbers as the CSV exports.
double rounded_number(double value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

}  // namespace slr
