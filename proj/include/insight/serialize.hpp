#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "insight/anomaly.hpp"
#include "insight/causal_graph.hpp"
#include "insight/explain.hpp"
#include "insight/granger.hpp"
#include "insight/ingest.hpp"
#include "insight/metrics.hpp"
#include "insight/synth.hpp"

namespace insight {

using Json = nlohmann::ordered_json;

/// Finite values as numbers, +/-infinity as the strings "inf" / "-inf".
Json f_stat_json(double f);
double f_stat_from_json(const Json& j);

Json frame_json(const TimeSeriesFrame& frame);
Json anomalies_json(const std::vector<AnomalyEvent>& events);
Json graph_json(const std::string& target, const DiscoveryResult& discovery, const CausalGraph& pruned);
Json cause_set_json(const CauseSet& causes, EpochSeconds anomaly_time);
Json explanation_json(const Explanation& ex, const std::string& target, EpochSeconds anomaly_time,
                      const std::string& prompt);
Json report_json(const EvaluationReport& report);

/// Accepts integer epoch seconds or an ISO-8601 string.
EpochSeconds time_from_json(const Json& j, const std::string& path);

std::vector<GroundTruthAnnotation> annotations_from_json(const Json& j);
/// A list of CauseSet records `{target, anomaly_time, causes:[{channel, f_stat}]}`.
std::vector<Prediction> predictions_from_json(const Json& j);

SynthSpec synth_spec_from_json(const Json& j);
/// Either a bare SynthSpec object or one carrying "injection" (and optionally "target").
ScenarioSpec scenario_spec_from_json(const Json& j);
Json ground_truth_json(const std::vector<SynthEdge>& edges,
                       const std::vector<std::string>& expected_causes,
                       const std::optional<AnomalyEvent>& expected_anomaly);

/// CSV in the schema parse_csv reads: `timestamp,<channel>...`, ISO timestamps, %.17g values.
std::string frame_csv(const TimeSeriesFrame& frame);

/// Pretty-printed JSON with a trailing newline.
std::string dump(const Json& j);

}  // namespace insight
