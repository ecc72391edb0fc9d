#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/config.hpp"
#include "insight/explain.hpp"
#include "insight/granger.hpp"
#include "insight/ingest.hpp"

namespace insight {

struct RunOptions {
    std::size_t workers = 1;
    /// Causes only, no explanation text.
    bool ci_only = false;
    /// Never contact the remote endpoint.
    bool template_only = false;
};

struct AnomalyReport {
    AnomalyEvent event;
    DiscoveryResult discovery;
    CausalGraph pruned;
    CauseSet causes;
    std::vector<DirectedCause> directed;
    std::string prompt;  // empty when there are no causes
    Explanation explanation;
    /// Set when the remote path failed and the template was used instead.
    std::optional<std::string> remote_error;
};

/// Window discovery -> prune -> rank -> direction -> prompt -> explanation for one anomaly.
AnomalyReport explain_anomaly(const TimeSeriesFrame& frame, const AnomalyEvent& event, const RunConfig& cfg,
                              const RunOptions& opts, std::size_t discovery_workers = 1);

struct PipelineResult {
    PreprocessResult preprocessed;
    std::vector<AnomalyEvent> anomalies;
    std::vector<AnomalyReport> reports;  // anomaly time order
    /// Anomalies that could not be explained, e.g. too little history: "time: reason".
    std::vector<std::string> skipped;
};

/// Full pipeline on raw telemetry. Anomalies are independent work items
/// spread over `opts.workers` threads; results do not depend on the count.
PipelineResult run_pipeline(const RawFrame& raw, const RunConfig& cfg, const RunOptions& opts);

/// Writes anomalies.json, causes.json, graphs/<time>.json and explanations/<time>.json
/// under `out_dir`, each through a temporary file and rename.
void write_outputs(const PipelineResult& result, const RunConfig& cfg, const std::string& out_dir);

/// Write-then-rename.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace insight
