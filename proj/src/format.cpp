#include "pathdist/format.hpp"

#include <cmath>

#include <fmt/format.h>

namespace pathdist {

std::string format_number(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    return fmt::format("{}", value);
}

std::string format_fixed(double value, int decimals) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.{}f}", value, decimals);
}

}  // namespace pathdist
