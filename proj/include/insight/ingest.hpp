#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "insight/timefmt.hpp"

namespace insight {

// ---------------------------------------------------------------------------
// Frames
// ---------------------------------------------------------------------------

struct RawChannel {
    std::string id;
    std::vector<std::optional<double>> values;
};

/// Telemetry as read from disk: possibly irregular timestamps, possibly gappy channels.
struct RawFrame {
    std::vector<EpochSeconds> timestamps;
    std::vector<RawChannel> channels;

    std::size_t length() const noexcept { return timestamps.size(); }

    /// Throws on non-increasing timestamps or ragged channels.
    void validate() const;
};

struct ChannelStats {
    double mean = 0.0;
    double std = 1.0;
    bool zero_variance = false;
};

struct Channel {
    std::string id;
    std::vector<double> values;
    ChannelStats stats;
};

/// Regular, gap-free, standardized multichannel series.
struct TimeSeriesFrame {
    EpochSeconds start = 0;
    std::int64_t interval = 3600;
    std::vector<Channel> channels;

    std::size_t length() const noexcept { return channels.empty() ? 0 : channels.front().values.size(); }
    EpochSeconds time_at(std::size_t index) const noexcept {
        return start + static_cast<EpochSeconds>(index) * interval;
    }
    /// Grid index of `t`, if `t` lies exactly on the grid inside the frame.
    std::optional<std::size_t> index_at(EpochSeconds t) const noexcept;

    const Channel* find(std::string_view id) const noexcept;
    /// Throws UnknownChannel.
    const Channel& at(std::string_view id) const;
};

struct PreprocessConfig {
    std::int64_t interval = 3600;
    int max_ffill_gap = 2;
    double max_missing_fraction = 0.20;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

RawFrame parse_csv(std::istream& input, std::string_view timestamp_column = "timestamp");

/// Buckets anchored at midnight UTC of the first day; each bucket value is the
/// mean of the observed inputs falling into [bucket_start, bucket_start + interval).
RawFrame resample(const RawFrame& frame, std::int64_t interval);

struct DropResult {
    RawFrame frame;
    std::vector<std::string> dropped;
};

/// Removes channels whose missing fraction is strictly above the threshold.
DropResult drop_sparse_channels(const RawFrame& frame, const PreprocessConfig& cfg);

/// Fills interior gaps only; leading and trailing runs stay missing.
RawFrame impute(const RawFrame& frame, const PreprocessConfig& cfg);

/// Drops leading and trailing rows in which any channel is still missing.
RawFrame trim_incomplete_edges(const RawFrame& frame);

/// Population z-scoring. `frame` must be gap-free and on a regular grid of `interval`.
TimeSeriesFrame standardize(const RawFrame& frame, std::int64_t interval);

struct PreprocessResult {
    TimeSeriesFrame frame;
    std::vector<std::string> dropped;
    std::size_t trimmed_leading = 0;
    std::size_t trimmed_trailing = 0;
};

/// resample -> drop_sparse_channels -> impute -> trim_incomplete_edges -> standardize.
PreprocessResult preprocess(const RawFrame& raw, const PreprocessConfig& cfg);

/// Re-expresses a gap-free frame as raw input (values as stored, no stats applied).
RawFrame to_raw(const TimeSeriesFrame& frame);

}  // namespace insight
