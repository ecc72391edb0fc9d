#include "insight/anomaly.hpp"

#include <cmath>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "anomaly";

const Channel& target_of(const TimeSeriesFrame& frame, const std::string& id) {
    const Channel* ch = frame.find(id);
    if (!ch) throw Error(kModule, ErrorCode::UnknownChannel, "target channel '" + id + "' not in frame");
    if (ch->stats.zero_variance) {
        throw Error(kModule, ErrorCode::ZeroVarianceTarget, "target channel '" + id + "' is constant");
    }
    return *ch;
}

AnomalyEvent make_event(const TimeSeriesFrame& frame, const Channel& ch, std::size_t index, std::size_t history) {
    AnomalyEvent ev;
    ev.index = index;
    ev.time = frame.time_at(index);
    ev.z_score = ch.values[index];
    ev.magnitude = ev.z_score * ch.stats.std;
    ev.short_window = index < history;
    return ev;
}

}  // namespace

void AnomalyConfig::validate() const {
    if (!(z_threshold > 0.0)) throw Error(kModule, ErrorCode::InvalidConfig, "anomaly.z_threshold: must be > 0");
    if (target_channel.empty()) throw Error(kModule, ErrorCode::InvalidConfig, "anomaly.target_channel: must be set");
}

std::vector<AnomalyEvent> detect_anomalies(const TimeSeriesFrame& frame, const AnomalyConfig& cfg) {
    cfg.validate();
    const Channel& ch = target_of(frame, cfg.target_channel);
    const auto& z = ch.values;

    std::vector<AnomalyEvent> events;
    std::size_t i = 0;
    while (i < z.size()) {
        if (!(std::abs(z[i]) > cfg.z_threshold)) {
            ++i;
            continue;
        }
        if (!cfg.merge_adjacent) {
            events.push_back(make_event(frame, ch, i, cfg.history_length));
            ++i;
            continue;
        }
        std::size_t best = i;
        std::size_t j = i + 1;
        for (; j < z.size() && std::abs(z[j]) > cfg.z_threshold; ++j) {
            if (std::abs(z[j]) > std::abs(z[best])) best = j;
        }
        events.push_back(make_event(frame, ch, best, cfg.history_length));
        i = j;
    }
    return events;
}

AnomalyEvent event_at(const TimeSeriesFrame& frame, const std::string& target_channel, std::size_t index,
                      std::size_t history_length) {
    const Channel& ch = target_of(frame, target_channel);
    if (index >= frame.length()) {
        throw Error(kModule, ErrorCode::InvalidArgument, "anomaly index outside the frame");
    }
    return make_event(frame, ch, index, history_length);
}

}  // namespace insight
