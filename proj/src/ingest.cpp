#include "insight/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "ingest";
constexpr double kZeroVarianceStd = 1e-12;

[[noreturn]] void fail(ErrorCode code, const std::string& detail) { throw Error(kModule, code, detail); }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// RFC-4180-ish: quoted fields may contain commas and doubled quotes; no embedded newlines.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back(trim(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.emplace_back(trim(field));
    return out;
}

std::optional<double> parse_cell(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

bool is_missing(const std::optional<double>& v) { return !v.has_value(); }

}  // namespace

// ---------------------------------------------------------------------------

void RawFrame::validate() const {
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (timestamps[i] <= timestamps[i - 1]) {
            fail(ErrorCode::NonMonotonicTimestamps,
                 "timestamp at row " + std::to_string(i) + " is not after its predecessor");
        }
    }
    for (const auto& ch : channels) {
        if (ch.values.size() != timestamps.size()) {
            fail(ErrorCode::InvalidArgument, "channel '" + ch.id + "' length differs from timestamps");
        }
    }
}

std::optional<std::size_t> TimeSeriesFrame::index_at(EpochSeconds t) const noexcept {
    if (t < start || interval <= 0) return std::nullopt;
    const auto offset = t - start;
    if (offset % interval != 0) return std::nullopt;
    const auto idx = static_cast<std::size_t>(offset / interval);
    if (idx >= length()) return std::nullopt;
    return idx;
}

const Channel* TimeSeriesFrame::find(std::string_view id) const noexcept {
    for (const auto& ch : channels) {
        if (ch.id == id) return &ch;
    }
    return nullptr;
}

const Channel& TimeSeriesFrame::at(std::string_view id) const {
    if (const auto* ch = find(id)) return *ch;
    throw Error("ingest", ErrorCode::UnknownChannel, "no channel named '" + std::string(id) + "'");
}

void PreprocessConfig::validate() const {
    if (interval <= 0) fail(ErrorCode::InvalidConfig, "preprocess.interval: must be > 0");
    if (max_ffill_gap < 0) fail(ErrorCode::InvalidConfig, "preprocess.max_ffill_gap: must be >= 0");
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0)) {
        fail(ErrorCode::InvalidConfig, "preprocess.max_missing_fraction: must lie in [0, 1]");
    }
}

// ---------------------------------------------------------------------------

RawFrame parse_csv(std::istream& input, std::string_view timestamp_column) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(input, line)) {
        if (!trim(line).empty()) {
            header = split_csv_line(line);
            break;
        }
    }
    if (header.empty()) fail(ErrorCode::EmptyInput, "no header row");
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

    const auto ts_it = std::find(header.begin(), header.end(), timestamp_column);
    if (ts_it == header.end()) {
        fail(ErrorCode::MissingTimestampColumn, "column '" + std::string(timestamp_column) + "' not in header");
    }
    const auto ts_col = static_cast<std::size_t>(ts_it - header.begin());

    RawFrame frame;
    std::vector<std::size_t> columns;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == ts_col) continue;
        columns.push_back(c);
        frame.channels.push_back({header[c], {}});
    }

    std::size_t row = 0;
    while (std::getline(input, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (ts_col >= fields.size()) {
            fail(ErrorCode::InvalidTimestamp, "row " + std::to_string(row) + " has no timestamp field");
        }
        const auto t = parse_timestamp(fields[ts_col]);
        if (!t) fail(ErrorCode::InvalidTimestamp, "row " + std::to_string(row) + ": '" + fields[ts_col] + "'");
        if (!frame.timestamps.empty() && *t <= frame.timestamps.back()) {
            fail(ErrorCode::NonMonotonicTimestamps,
                 "row " + std::to_string(row) + " timestamp '" + fields[ts_col] + "' is not after its predecessor");
        }
        frame.timestamps.push_back(*t);
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const auto c = columns[k];
            frame.channels[k].values.push_back(c < fields.size() ? parse_cell(fields[c]) : std::nullopt);
        }
    }
    if (frame.timestamps.empty()) fail(ErrorCode::EmptyInput, "header present but no data rows");
    return frame;
}

RawFrame resample(const RawFrame& frame, std::int64_t interval) {
    if (interval <= 0) fail(ErrorCode::InvalidArgument, "resample interval must be > 0");
    if (frame.timestamps.empty()) fail(ErrorCode::EmptyInput, "nothing to resample");
    frame.validate();

    const EpochSeconds first = frame.timestamps.front();
    const EpochSeconds day0 = floor_div(first, kSecondsPerDay) * kSecondsPerDay;
    const EpochSeconds grid_start = day0 + floor_div(first - day0, interval) * interval;
    const auto buckets = static_cast<std::size_t>(floor_div(frame.timestamps.back() - grid_start, interval) + 1);

    RawFrame out;
    out.timestamps.resize(buckets);
    for (std::size_t b = 0; b < buckets; ++b) out.timestamps[b] = grid_start + static_cast<EpochSeconds>(b) * interval;

    std::vector<std::size_t> bucket_of(frame.length());
    for (std::size_t i = 0; i < frame.length(); ++i) {
        bucket_of[i] = static_cast<std::size_t>(floor_div(frame.timestamps[i] - grid_start, interval));
    }

    out.channels.reserve(frame.channels.size());
    std::vector<double> sum(buckets);
    std::vector<std::size_t> count(buckets);
    for (const auto& ch : frame.channels) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        for (std::size_t i = 0; i < ch.values.size(); ++i) {
            if (ch.values[i]) {
                sum[bucket_of[i]] += *ch.values[i];
                ++count[bucket_of[i]];
            }
        }
        RawChannel rc{ch.id, std::vector<std::optional<double>>(buckets)};
        for (std::size_t b = 0; b < buckets; ++b) {
            if (count[b] > 0) rc.values[b] = sum[b] / static_cast<double>(count[b]);
        }
        out.channels.push_back(std::move(rc));
    }
    return out;
}

DropResult drop_sparse_channels(const RawFrame& frame, const PreprocessConfig& cfg) {
    cfg.validate();
    if (frame.length() == 0) fail(ErrorCode::EmptyInput, "frame has no rows");
    DropResult result;
    result.frame.timestamps = frame.timestamps;
    const auto n = static_cast<double>(frame.length());
    for (const auto& ch : frame.channels) {
        const auto missing = std::count_if(ch.values.begin(), ch.values.end(), is_missing);
        if (static_cast<double>(missing) / n > cfg.max_missing_fraction) {
            result.dropped.push_back(ch.id);
        } else {
            result.frame.channels.push_back(ch);
        }
    }
    if (result.frame.channels.empty()) {
        fail(ErrorCode::AllChannelsDropped, "every channel exceeds the missing-data threshold");
    }
    return result;
}

RawFrame impute(const RawFrame& frame, const PreprocessConfig& cfg) {
    cfg.validate();
    RawFrame out = frame;
    for (auto& ch : out.channels) {
        auto& v = ch.values;
        const auto first = std::find_if(v.begin(), v.end(), [](const auto& x) { return x.has_value(); });
        if (first == v.end()) fail(ErrorCode::AllMissingChannel, "channel '" + ch.id + "' has no observed values");

        std::size_t last_obs = static_cast<std::size_t>(first - v.begin());
        for (std::size_t i = last_obs + 1; i < v.size(); ++i) {
            if (!v[i]) continue;
            const std::size_t gap = i - last_obs - 1;
            if (gap > 0) {
                const double left = *v[last_obs];
                const double right = *v[i];
                if (gap <= static_cast<std::size_t>(cfg.max_ffill_gap)) {
                    for (std::size_t k = last_obs + 1; k < i; ++k) v[k] = left;
                } else {
                    const double span = static_cast<double>(i - last_obs);
                    for (std::size_t k = last_obs + 1; k < i; ++k) {
                        const double w = static_cast<double>(k - last_obs) / span;
                        v[k] = left + (right - left) * w;
                    }
                }
            }
            last_obs = i;
        }
    }
    return out;
}

RawFrame trim_incomplete_edges(const RawFrame& frame) {
    const auto complete = [&](std::size_t row) {
        return std::all_of(frame.channels.begin(), frame.channels.end(),
                           [row](const RawChannel& ch) { return ch.values[row].has_value(); });
    };
    std::size_t lo = 0;
    std::size_t hi = frame.length();
    while (lo < hi && !complete(lo)) ++lo;
    while (hi > lo && !complete(hi - 1)) --hi;
    if (lo == hi) fail(ErrorCode::EmptyInput, "no row has every channel observed");

    RawFrame out;
    out.timestamps.assign(frame.timestamps.begin() + lo, frame.timestamps.begin() + hi);
    for (const auto& ch : frame.channels) {
        out.channels.push_back({ch.id, {ch.values.begin() + lo, ch.values.begin() + hi}});
    }
    return out;
}

TimeSeriesFrame standardize(const RawFrame& frame, std::int64_t interval) {
    if (frame.length() == 0) fail(ErrorCode::EmptyInput, "frame has no rows");
    TimeSeriesFrame out;
    out.start = frame.timestamps.front();
    out.interval = interval;
    const auto n = static_cast<double>(frame.length());
    for (const auto& rc : frame.channels) {
        Channel ch;
        ch.id = rc.id;
        ch.values.resize(rc.values.size());
        double mean = 0.0;
        for (const auto& v : rc.values) {
            if (!v) fail(ErrorCode::InvalidArgument, "standardize requires a gap-free frame ('" + rc.id + "')");
            mean += *v;
        }
        mean /= n;
        double ss = 0.0;
        for (const auto& v : rc.values) ss += (*v - mean) * (*v - mean);
        const double sd = std::sqrt(ss / n);
        ch.stats = {mean, sd, sd < kZeroVarianceStd};
        for (std::size_t i = 0; i < rc.values.size(); ++i) {
            ch.values[i] = ch.stats.zero_variance ? 0.0 : (*rc.values[i] - mean) / sd;
        }
        out.channels.push_back(std::move(ch));
    }
    return out;
}

PreprocessResult preprocess(const RawFrame& raw, const PreprocessConfig& cfg) {
    cfg.validate();
    const RawFrame grid = resample(raw, cfg.interval);
    DropResult kept = drop_sparse_channels(grid, cfg);
    const RawFrame filled = impute(kept.frame, cfg);
    const RawFrame trimmed = trim_incomplete_edges(filled);

    PreprocessResult result;
    result.dropped = std::move(kept.dropped);
    const auto first = std::find(filled.timestamps.begin(), filled.timestamps.end(), trimmed.timestamps.front());
    result.trimmed_leading = static_cast<std::size_t>(first - filled.timestamps.begin());
    result.trimmed_trailing = filled.length() - trimmed.length() - result.trimmed_leading;
    result.frame = standardize(trimmed, cfg.interval);
    return result;
}

RawFrame to_raw(const TimeSeriesFrame& frame) {
    RawFrame out;
    out.timestamps.resize(frame.length());
    for (std::size_t i = 0; i < frame.length(); ++i) out.timestamps[i] = frame.time_at(i);
    for (const auto& ch : frame.channels) {
        out.channels.push_back({ch.id, {ch.values.begin(), ch.values.end()}});
    }
    return out;
}

}  // namespace insight
