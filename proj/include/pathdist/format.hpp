#pragma once

#include <string>

namespace pathdist {

/// Shortest text that parses back to exactly the same double.
std::string format_number(double value);
/// Fixed-point text with the given number of decimals; "inf" for infinity.
std::string format_fixed(double value, int decimals = 6);

}  // namespace pathdist
