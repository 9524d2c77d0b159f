#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wmr {

/// Exact decimal price: an integer count of 1e-9 rate units.
///
/// Tick and bar prices live on a much coarser per-pair grid (the tick size),
/// so the halvings that occur in median/mid arithmetic stay exactly
/// representable. Comparisons are plain integer comparisons.
using Price = std::int64_t;

/// Price units per 1.0 of rate.
inline constexpr Price kPriceScale = 1'000'000'000;

/// Convert price units to a floating-point rate.
constexpr double to_rate(Price p) { return static_cast<double>(p) / kPriceScale; }

/// Nearest price unit for a floating-point rate.
Price price_from_rate(double rate);

/// Round to the nearest multiple of `tick` (tick > 0, half rounds up).
Price round_to_grid(Price p, Price tick);

/// Parse a decimal literal ("1.2004") exactly. Throws std::invalid_argument
/// on malformed input or more than 9 fractional digits.
Price parse_price(std::string_view text);

/// Shortest exact decimal representation ("1.2004", "0.00001").
std::string format_price(Price p);

} // namespace wmr
