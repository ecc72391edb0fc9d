#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "insight/ingest.hpp"

namespace insight {

struct AnomalyEvent {
    EpochSeconds time = 0;
    std::size_t index = 0;
    double z_score = 0.0;
    /// Deviation from the channel mean in raw units.
    double magnitude = 0.0;
    /// Fewer than `history_length` intervals precede the event.
    bool short_window = false;
};

struct AnomalyConfig {
    double z_threshold = 3.0;
    std::string target_channel = "energy";
    bool merge_adjacent = true;
    /// History the causal window will need; events with less are flagged short_window.
    std::size_t history_length = 24;

    void validate() const;
};

/// Full-series z-score detector on the target channel. Runs of consecutive
/// over-threshold points collapse to the point of largest |z| when merging.
std::vector<AnomalyEvent> detect_anomalies(const TimeSeriesFrame& frame, const AnomalyConfig& cfg);

/// Builds the event for an arbitrary grid index (used when the caller names the anchor).
AnomalyEvent event_at(const TimeSeriesFrame& frame, const std::string& target_channel, std::size_t index,
                      std::size_t history_length);

}  // namespace insight
