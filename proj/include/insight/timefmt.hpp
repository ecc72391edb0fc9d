#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace insight {

using EpochSeconds = std::int64_t;

constexpr EpochSeconds kSecondsPerDay = 86400;

/// Parses integer epoch seconds or ISO-8601 `YYYY-MM-DDTHH:MM:SS` (a space is
/// accepted in place of `T`, fractional seconds are truncated) with an optional
/// `Z` / `+HH:MM` / `-HHMM` zone suffix. Returns nullopt on anything else.
std::optional<EpochSeconds> parse_timestamp(std::string_view text);

/// `2019-04-15T14:00:00Z`
std::string format_iso8601(EpochSeconds t);

/// `20190415T140000Z`, safe for file names.
std::string format_compact(EpochSeconds t);

/// Floor division that rounds toward negative infinity.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace insight
