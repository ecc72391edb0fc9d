#include "insight/timefmt.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace insight {
namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        v = v * 10 + (s[i] - '0');
    }
    out = v;
    return true;
}

std::optional<EpochSeconds> parse_epoch(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Returns the zone offset in seconds east of UTC, or nullopt if the suffix is malformed.
std::optional<std::int64_t> parse_zone(std::string_view z) {
    if (z.empty() || z == "Z" || z == "z") return 0;
    if (z[0] != '+' && z[0] != '-') return std::nullopt;
    const int sign = z[0] == '-' ? -1 : 1;
    z.remove_prefix(1);
    int hh = 0;
    int mm = 0;
    if (!read_digits(z, 0, 2, hh)) return std::nullopt;
    if (z.size() == 2) {
        // +HH
    } else if (z.size() == 5 && z[2] == ':') {
        if (!read_digits(z, 3, 2, mm)) return std::nullopt;
    } else if (z.size() == 4) {
        if (!read_digits(z, 2, 2, mm)) return std::nullopt;
    } else {
        return std::nullopt;
    }
    if (hh > 23 || mm > 59) return std::nullopt;
    return sign * (hh * 3600 + mm * 60);
}

}  // namespace

std::optional<EpochSeconds> parse_timestamp(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;

    if (s.size() < 10 || s[4] != '-') return parse_epoch(s);

    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (!read_digits(s, 0, 4, y) || s[4] != '-' || !read_digits(s, 5, 2, mo) || s[7] != '-' ||
        !read_digits(s, 8, 2, d)) {
        return std::nullopt;
    }
    std::size_t pos = 10;
    if (pos < s.size()) {
        if (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ') return std::nullopt;
        ++pos;
        if (!read_digits(s, pos, 2, h) || pos + 2 >= s.size() || s[pos + 2] != ':' ||
            !read_digits(s, pos + 3, 2, mi)) {
            return std::nullopt;
        }
        pos += 5;
        if (pos < s.size() && s[pos] == ':') {
            if (!read_digits(s, pos + 1, 2, sec)) return std::nullopt;
            pos += 3;
            if (pos < s.size() && s[pos] == '.') {
                ++pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            }
        }
    }
    const auto zone = parse_zone(s.substr(pos));
    if (!zone) return std::nullopt;
    if (h > 23 || mi > 59 || sec > 60) return std::nullopt;

    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    const std::int64_t days = sys_days{ymd}.time_since_epoch().count();
    return days * kSecondsPerDay + h * 3600 + mi * 60 + sec - *zone;
}

namespace {

struct Civil {
    int y;
    unsigned mo, d;
    int h, mi, s;
};

Civil to_civil(EpochSeconds t) {
    using namespace std::chrono;
    const std::int64_t days = floor_div(t, kSecondsPerDay);
    const std::int64_t rem = t - days * kSecondsPerDay;
    const year_month_day ymd{sys_days{std::chrono::days{days}}};
    return {int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
            int((rem % 3600) / 60), int(rem % 60)};
}

}  // namespace

std::string format_iso8601(EpochSeconds t) {
    const Civil c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", c.y, c.mo, c.d, c.h, c.mi, c.s);
    return buf;
}

std::string format_compact(EpochSeconds t) {
    const Civil c = to_civil(t);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02d%02d%02dZ", c.y, c.mo, c.d, c.h, c.mi, c.s);
    return buf;
}

}  // namespace insight
