#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/explain.hpp"
#include "insight/granger.hpp"
#include "insight/ingest.hpp"
#include "insight/remote.hpp"
#include "insight/serialize.hpp"

namespace insight {

struct RunConfig {
    PreprocessConfig preprocess;
    AnomalyConfig anomaly;
    WindowConfig window;
    PruneConfig prune;
    std::size_t rank_k = 3;
    std::optional<RemoteConfig> remote;
    ActionCatalog catalog = ActionCatalog::defaults();
    std::size_t workers = 1;
    std::string timestamp_column = "timestamp";

    /// Checks every nested invariant; throws InvalidConfig naming the first bad field.
    void validate() const;
};

/// Strict reader: unknown keys and wrong types are InvalidConfig errors that
/// name the offending path (e.g. "window.lag").
RunConfig config_from_json(const Json& j);
RunConfig load_config(const std::string& path);

/// INSIGHT_REMOTE_URL overrides (or creates) the remote section's URL.
void apply_environment(RunConfig& cfg);

}  // namespace insight
