#pragma once

#include <string>

#include "nomoforge/tabular_model.hpp"

namespace nomoforge {

/// Shortest decimal form that round-trips, e.g. "16", "0.25".
std::string format_number(double value);

/// Fixed two-decimal form used for every numeric SVG attribute; never "-0.00".
std::string format_fixed2(double value);

std::string format_cell(const Cell& cell);

/// Rounds to 12 significant digits.
double tidy_number(double value);

}  // namespace nomoforge
