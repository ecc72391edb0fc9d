#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/ingest.hpp"

namespace insight {

enum class Direction { Up, Down };

/// U+2191 / U+2193 as UTF-8.
std::string_view arrow(Direction d);
std::string_view to_string(Direction d);

struct DirectedCause {
    std::string channel;
    Direction direction = Direction::Down;
    double f_stat = 0.0;

    bool operator==(const DirectedCause&) const = default;
};

struct ExplanationPrompt {
    std::string text;
};

enum class ExplanationSource { Template, Remote, None };
std::string_view to_string(ExplanationSource s);

struct Explanation {
    std::string text;
    ExplanationSource source = ExplanationSource::Template;
    std::vector<DirectedCause> causes;
};

/// Up iff the value at the anomaly exceeds the mean of the `window_length`
/// values immediately before it. Throws WindowTooShort.
DirectedCause annotate_direction(const std::string& channel, const TimeSeriesFrame& frame, const AnomalyEvent& anomaly,
                                 std::size_t window_length, double f_stat = 0.0);

std::vector<DirectedCause> annotate_causes(const CauseSet& causes, const TimeSeriesFrame& frame,
                                           const AnomalyEvent& anomaly, std::size_t window_length);

/// `CAUSES: [c1↑, c2↓].\nGENERATE_EXPLANATION:`. Throws EmptyCauseList.
ExplanationPrompt build_prompt(std::span<const DirectedCause> causes);

/// Inverse of build_prompt; nullopt if `text` does not follow the grammar.
std::optional<std::vector<std::pair<std::string, Direction>>> parse_prompt(std::string_view text);

/// Maps channel-name patterns (`*` and `?` wildcards, case-insensitive) to
/// corrective-action phrases, plus optional display aliases for channel ids.
class ActionCatalog {
public:
    struct Rule {
        std::string pattern;
        std::string action;
    };

    ActionCatalog() = default;
    ActionCatalog(std::vector<Rule> rules, std::string fallback_action,
                  std::map<std::string, std::string> aliases = {});

    /// Seed catalog covering common HVAC telemetry.
    static ActionCatalog defaults();

    /// First matching rule's phrase, else the fallback.
    const std::string& action_for(const std::string& channel) const;
    std::string display_name(const std::string& channel) const;

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    const std::string& fallback_action() const noexcept { return fallback_; }
    const std::map<std::string, std::string>& aliases() const noexcept { return aliases_; }

private:
    std::vector<Rule> rules_;
    std::string fallback_ = "reviewing the HVAC schedule and setpoints for the affected zone";
    std::map<std::string, std::string> aliases_;
};

bool glob_match(std::string_view pattern, std::string_view text);

/// Deterministic two-sentence explanation: attribution in ranked order, then
/// one corrective action chosen from the top cause. Throws EmptyCauseList.
Explanation render_template(std::span<const DirectedCause> causes, const std::string& target,
                            const AnomalyEvent& anomaly, const ActionCatalog& catalog);

}  // namespace insight
