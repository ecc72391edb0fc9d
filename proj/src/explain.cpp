#include "insight/explain.hpp"

#include <cctype>
#include <cstdio>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "explain";
constexpr std::string_view kUp = "↑";
constexpr std::string_view kDown = "↓";
constexpr std::string_view kPromptHead = "CAUSES: [";
constexpr std::string_view kPromptTail = "].\nGENERATE_EXPLANATION:";

std::string_view direction_phrase(Direction d) { return d == Direction::Up ? "a rise in" : "a drop in"; }

std::string format_anchor(EpochSeconds t) {
    // 2019-04-15T14:00:00Z -> 2019-04-15 14:00 UTC
    const std::string iso = format_iso8601(t);
    return iso.substr(0, 10) + " " + iso.substr(11, 5) + " UTC";
}

}  // namespace

std::string_view arrow(Direction d) { return d == Direction::Up ? kUp : kDown; }

std::string_view to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }

std::string_view to_string(ExplanationSource s) {
    switch (s) {
    case ExplanationSource::Template: return "template";
    case ExplanationSource::Remote: return "remote";
    case ExplanationSource::None: return "none";
    }
    return "none";
}

DirectedCause annotate_direction(const std::string& channel, const TimeSeriesFrame& frame, const AnomalyEvent& anomaly,
                                 std::size_t window_length, double f_stat) {
    const Channel* ch = frame.find(channel);
    if (!ch) throw Error(kModule, ErrorCode::UnknownChannel, "no channel named '" + channel + "'");
    if (anomaly.index >= ch->values.size()) throw Error(kModule, ErrorCode::InvalidArgument, "anomaly outside frame");
    if (window_length == 0 || anomaly.index < window_length) {
        throw Error(kModule, ErrorCode::WindowTooShort,
                    "need " + std::to_string(window_length) + " intervals before index " + std::to_string(anomaly.index));
    }
    double mean = 0.0;
    for (std::size_t i = anomaly.index - window_length; i < anomaly.index; ++i) mean += ch->values[i];
    mean /= static_cast<double>(window_length);
    const Direction d = ch->values[anomaly.index] > mean ? Direction::Up : Direction::Down;
    return {channel, d, f_stat};
}

std::vector<DirectedCause> annotate_causes(const CauseSet& causes, const TimeSeriesFrame& frame,
                                           const AnomalyEvent& anomaly, std::size_t window_length) {
    std::vector<DirectedCause> out;
    out.reserve(causes.causes.size());
    for (const auto& c : causes.causes) {
        out.push_back(annotate_direction(c.channel, frame, anomaly, window_length, c.f_stat));
    }
    return out;
}

ExplanationPrompt build_prompt(std::span<const DirectedCause> causes) {
    if (causes.empty()) throw Error(kModule, ErrorCode::EmptyCauseList, "cannot build a prompt without causes");
    std::string text(kPromptHead);
    for (std::size_t i = 0; i < causes.size(); ++i) {
        if (i > 0) text += ", ";
        text += causes[i].channel;
        text += arrow(causes[i].direction);
    }
    text += kPromptTail;
    return {std::move(text)};
}

std::optional<std::vector<std::pair<std::string, Direction>>> parse_prompt(std::string_view text) {
    if (!text.starts_with(kPromptHead) || !text.ends_with(kPromptTail)) return std::nullopt;
    std::string_view body = text.substr(kPromptHead.size(), text.size() - kPromptHead.size() - kPromptTail.size());

    std::vector<std::pair<std::string, Direction>> items;
    while (true) {
        const auto sep = body.find(", ");
        std::string_view item = body.substr(0, sep);
        Direction d;
        if (item.ends_with(kUp)) {
            d = Direction::Up;
            item.remove_suffix(kUp.size());
        } else if (item.ends_with(kDown)) {
            d = Direction::Down;
            item.remove_suffix(kDown.size());
        } else {
            return std::nullopt;
        }
        if (item.empty() || item.find_first_of(",]") != std::string_view::npos) return std::nullopt;
        items.emplace_back(std::string(item), d);
        if (sep == std::string_view::npos) break;
        body.remove_prefix(sep + 2);
    }
    return items;
}

// ---------------------------------------------------------------------------

bool glob_match(std::string_view pattern, std::string_view text) {
    const auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    std::size_t p = 0, t = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || lower(pattern[p]) == lower(text[t]))) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

ActionCatalog::ActionCatalog(std::vector<Rule> rules, std::string fallback_action,
                             std::map<std::string, std::string> aliases)
    : rules_(std::move(rules)), fallback_(std::move(fallback_action)), aliases_(std::move(aliases)) {}

ActionCatalog ActionCatalog::defaults() {
    return ActionCatalog(
        {
            {"*occupan*", "rebalancing occupancy across zones or pre-cooling ahead of expected arrivals"},
            {"*damper*", "reopening the damper slightly to restore airflow"},
            {"*chilled*water*", "checking the chilled water valve position and pump staging"},
            {"*temp*", "reviewing the zone temperature setpoint and its deadband"},
            {"*setpoint*", "restoring the setpoint to its scheduled value"},
            {"*fan*", "verifying the fan speed schedule"},
            {"*light*", "checking the lighting schedule for after-hours operation"},
        },
        "reviewing the HVAC schedule and setpoints for the affected zone");
}

const std::string& ActionCatalog::action_for(const std::string& channel) const {
    for (const auto& rule : rules_) {
        if (glob_match(rule.pattern, channel)) return rule.action;
    }
    return fallback_;
}

std::string ActionCatalog::display_name(const std::string& channel) const {
    const auto it = aliases_.find(channel);
    return it == aliases_.end() ? channel : it->second;
}

Explanation render_template(std::span<const DirectedCause> causes, const std::string& target,
                            const AnomalyEvent& anomaly, const ActionCatalog& catalog) {
    if (causes.empty()) throw Error(kModule, ErrorCode::EmptyCauseList, "cannot explain an anomaly without causes");

    std::string attribution;
    for (std::size_t i = 0; i < causes.size(); ++i) {
        if (i == 1) {
            attribution += " together with ";
        } else if (i > 1) {
            attribution += i + 1 == causes.size() ? " and " : ", ";
        }
        attribution += direction_phrase(causes[i].direction);
        attribution += ' ';
        attribution += catalog.display_name(causes[i].channel);
    }

    char z[32];
    std::snprintf(z, sizeof z, "%.2f", anomaly.z_score);

    Explanation ex;
    ex.source = ExplanationSource::Template;
    ex.causes.assign(causes.begin(), causes.end());
    ex.text = std::string("The ") + (anomaly.z_score >= 0.0 ? "spike" : "drop") + " in " +
              catalog.display_name(target) + " at " + format_anchor(anomaly.time) + " (z = " + z +
              ") was driven by " + attribution + ". Consider " + catalog.action_for(causes.front().channel) +
              " to prevent a recurrence.";
    return ex;
}

}  // namespace insight
