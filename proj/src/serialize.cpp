#include "insight/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "insight/error.hpp"

namespace insight {
namespace {

[[noreturn]] void bad(std::string_view module, ErrorCode code, const std::string& path, const std::string& what) {
    throw Error(module, code, path + ": " + what);
}

const Json& field(const Json& obj, const char* key, const std::string& path, std::string_view module, ErrorCode code) {
    if (!obj.is_object()) bad(module, code, path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) bad(module, code, path + "." + key, "missing");
    return *it;
}

std::string string_of(const Json& j, const std::string& path, std::string_view module, ErrorCode code) {
    if (!j.is_string()) bad(module, code, path, "expected a string");
    return j.get<std::string>();
}

double number_of(const Json& j, const std::string& path, std::string_view module, ErrorCode code) {
    if (!j.is_number()) bad(module, code, path, "expected a number");
    return j.get<double>();
}

std::int64_t integer_of(const Json& j, const std::string& path, std::string_view module, ErrorCode code) {
    if (!j.is_number_integer()) bad(module, code, path, "expected an integer");
    return j.get<std::int64_t>();
}

std::vector<double> numbers_of(const Json& j, const std::string& path, std::string_view module, ErrorCode code) {
    if (!j.is_array()) bad(module, code, path, "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_of(j[i], path + "[" + std::to_string(i) + "]", module, code));
    return out;
}

std::vector<std::string> strings_of(const Json& j, const std::string& path, std::string_view module, ErrorCode code) {
    if (!j.is_array()) bad(module, code, path, "expected an array");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string_of(j[i], path + "[" + std::to_string(i) + "]", module, code));
    return out;
}

Json edge_stats_json(const std::string& source, const std::string& dest, const EdgeStats& s) {
    return Json{{"source", source}, {"dest", dest}, {"f_stat", f_stat_json(s.f_stat)}, {"p_value", s.p_value},
                {"lag", s.lag}};
}

}  // namespace

Json f_stat_json(double f) {
    if (std::isinf(f)) return f > 0 ? "inf" : "-inf";
    return f;
}

double f_stat_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error("metrics", ErrorCode::InvalidArgument, "f_stat: unexpected string '" + s + "'");
    }
    if (!j.is_number()) throw Error("metrics", ErrorCode::InvalidArgument, "f_stat: expected a number");
    return j.get<double>();
}

Json frame_json(const TimeSeriesFrame& frame) {
    Json channels = Json::array();
    for (const auto& ch : frame.channels) {
        channels.push_back({{"id", ch.id},
                            {"mean", ch.stats.mean},
                            {"std", ch.stats.std},
                            {"zero_variance", ch.stats.zero_variance},
                            {"values", ch.values}});
    }
    return Json{{"start", frame.start}, {"interval", frame.interval}, {"channels", std::move(channels)}};
}

Json anomalies_json(const std::vector<AnomalyEvent>& events) {
    Json list = Json::array();
    for (const auto& e : events) {
        list.push_back({{"time", e.time},
                        {"index", e.index},
                        {"z_score", e.z_score},
                        {"magnitude", e.magnitude},
                        {"short_window", e.short_window}});
    }
    return Json{{"events", std::move(list)}};
}

Json graph_json(const std::string& target, const DiscoveryResult& discovery, const CausalGraph& pruned) {
    Json edges = Json::array();
    for (const auto& [key, stats] : pruned.edges()) edges.push_back(edge_stats_json(key.first, key.second, stats));
    Json removed = Json::array();
    for (const auto& [key, stats] : discovery.graph.edges()) {
        if (!pruned.has_edge(key.first, key.second)) removed.push_back(edge_stats_json(key.first, key.second, stats));
    }
    return Json{{"target", target},
                {"window", {{"start_index", discovery.start_index}, {"end_index", discovery.end_index}}},
                {"edges", std::move(edges)},
                {"pruned_edges", std::move(removed)},
                {"skipped_channels", discovery.skipped_channels},
                {"diagnostics", discovery.diagnostics}};
}

Json cause_set_json(const CauseSet& causes, EpochSeconds anomaly_time) {
    Json list = Json::array();
    for (const auto& c : causes.causes) list.push_back({{"channel", c.channel}, {"f_stat", f_stat_json(c.f_stat)}});
    return Json{{"target", causes.target}, {"anomaly_time", anomaly_time}, {"causes", std::move(list)}};
}

Json explanation_json(const Explanation& ex, const std::string& target, EpochSeconds anomaly_time,
                      const std::string& prompt) {
    Json causes = Json::array();
    for (const auto& c : ex.causes) {
        causes.push_back({{"channel", c.channel}, {"direction", to_string(c.direction)}, {"f_stat", f_stat_json(c.f_stat)}});
    }
    return Json{{"anomaly_time", anomaly_time},
                {"target", target},
                {"causes", std::move(causes)},
                {"prompt", prompt},
                {"text", ex.text},
                {"source", to_string(ex.source)}};
}

Json report_json(const EvaluationReport& report) {
    Json per = Json::array();
    for (const auto& s : report.per_anomaly) {
        per.push_back({{"anomaly_time", s.anomaly_time},
                       {"matched", s.matched},
                       {"top1_correct", s.top1_correct},
                       {"precision_at_3", s.precision_at_3},
                       {"recall_at_3", s.recall_at_3}});
    }
    return Json{{"acc_at_1", report.acc_at_1},
                {"precision_at_3", report.precision_at_3},
                {"recall_at_3", report.recall_at_3},
                {"n_evaluated", report.n_evaluated},
                {"n_annotations", report.n_annotations},
                {"per_anomaly", std::move(per)}};
}

EpochSeconds time_from_json(const Json& j, const std::string& path) {
    if (j.is_number_integer()) return j.get<EpochSeconds>();
    if (j.is_string()) {
        if (const auto t = parse_timestamp(j.get<std::string>())) return *t;
    }
    throw Error("metrics", ErrorCode::InvalidArgument, path + ": expected epoch seconds or an ISO-8601 string");
}

std::vector<GroundTruthAnnotation> annotations_from_json(const Json& j) {
    constexpr std::string_view m = "metrics";
    constexpr ErrorCode c = ErrorCode::InvalidArgument;
    if (!j.is_array()) bad(m, c, "annotations", "expected an array");
    std::vector<GroundTruthAnnotation> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "annotations[" + std::to_string(i) + "]";
        GroundTruthAnnotation a;
        a.anomaly_time = time_from_json(field(j[i], "anomaly_time", path, m, c), path + ".anomaly_time");
        a.primary_cause = string_of(field(j[i], "primary_cause", path, m, c), path + ".primary_cause", m, c);
        a.true_causes = strings_of(field(j[i], "true_causes", path, m, c), path + ".true_causes", m, c);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<Prediction> predictions_from_json(const Json& j) {
    constexpr std::string_view m = "metrics";
    constexpr ErrorCode c = ErrorCode::InvalidArgument;
    if (!j.is_array()) bad(m, c, "predictions", "expected an array");
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "predictions[" + std::to_string(i) + "]";
        Prediction p;
        p.anomaly_time = time_from_json(field(j[i], "anomaly_time", path, m, c), path + ".anomaly_time");
        if (j[i].contains("target")) p.causes.target = string_of(j[i]["target"], path + ".target", m, c);
        const Json& causes = field(j[i], "causes", path, m, c);
        if (!causes.is_array()) bad(m, c, path + ".causes", "expected an array");
        for (std::size_t k = 0; k < causes.size(); ++k) {
            const std::string cpath = path + ".causes[" + std::to_string(k) + "]";
            RankedCause rc;
            rc.channel = string_of(field(causes[k], "channel", cpath, m, c), cpath + ".channel", m, c);
            if (causes[k].contains("f_stat")) rc.f_stat = f_stat_from_json(causes[k]["f_stat"]);
            p.causes.causes.push_back(std::move(rc));
        }
        out.push_back(std::move(p));
    }
    return out;
}

SynthSpec synth_spec_from_json(const Json& j) {
    constexpr std::string_view m = "synth";
    constexpr ErrorCode c = ErrorCode::InvalidSpec;
    const std::string root = "spec";
    SynthSpec s;
    s.channels = strings_of(field(j, "channels", root, m, c), root + ".channels", m, c);
    s.self_coefficients = numbers_of(field(j, "self_coefficients", root, m, c), root + ".self_coefficients", m, c);
    s.noise_std = numbers_of(field(j, "noise_std", root, m, c), root + ".noise_std", m, c);
    const auto n = integer_of(field(j, "n", root, m, c), root + ".n", m, c);
    if (n <= 0) bad(m, c, root + ".n", "must be > 0");
    s.n = static_cast<std::size_t>(n);
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) bad(m, c, root + ".seed", "expected an integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("start")) s.start = time_from_json(j["start"], root + ".start");
    if (j.contains("interval")) s.interval = integer_of(j["interval"], root + ".interval", m, c);
    if (j.contains("edges")) {
        const Json& edges = j["edges"];
        if (!edges.is_array()) bad(m, c, root + ".edges", "expected an array");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string path = root + ".edges[" + std::to_string(i) + "]";
            SynthEdge e;
            e.source = string_of(field(edges[i], "source", path, m, c), path + ".source", m, c);
            e.dest = string_of(field(edges[i], "dest", path, m, c), path + ".dest", m, c);
            e.lag = static_cast<int>(integer_of(field(edges[i], "lag", path, m, c), path + ".lag", m, c));
            e.coefficient = number_of(field(edges[i], "coefficient", path, m, c), path + ".coefficient", m, c);
            s.edges.push_back(std::move(e));
        }
    }
    return s;
}

ScenarioSpec scenario_spec_from_json(const Json& j) {
    constexpr std::string_view m = "synth";
    constexpr ErrorCode c = ErrorCode::InvalidSpec;
    ScenarioSpec s;
    s.base = synth_spec_from_json(j);
    if (j.contains("target")) s.target = string_of(j["target"], "spec.target", m, c);
    if (j.contains("z_threshold")) s.z_threshold = number_of(j["z_threshold"], "spec.z_threshold", m, c);
    if (j.contains("injection")) {
        const Json& inj = j["injection"];
        const std::string path = "spec.injection";
        s.injection.channel = string_of(field(inj, "channel", path, m, c), path + ".channel", m, c);
        const auto start = integer_of(field(inj, "start_index", path, m, c), path + ".start_index", m, c);
        const auto duration = integer_of(field(inj, "duration", path, m, c), path + ".duration", m, c);
        if (start < 0 || duration < 0) bad(m, c, path, "start_index and duration must be >= 0");
        s.injection.start_index = static_cast<std::size_t>(start);
        s.injection.duration = static_cast<std::size_t>(duration);
        s.injection.magnitude = number_of(field(inj, "magnitude", path, m, c), path + ".magnitude", m, c);
    } else {
        // No injection: a zero-length step on the first channel.
        s.injection = {s.base.channels.empty() ? std::string() : s.base.channels.front(), 0, 0, 0.0};
        if (!j.contains("target") && !s.base.channels.empty()) s.target = s.base.channels.back();
    }
    return s;
}

Json ground_truth_json(const std::vector<SynthEdge>& edges,
                       const std::vector<std::string>& expected_causes,
                       const std::optional<AnomalyEvent>& expected_anomaly) {
    Json list = Json::array();
    for (const auto& e : edges) {
        list.push_back({{"source", e.source}, {"dest", e.dest}, {"lag", e.lag}, {"coefficient", e.coefficient}});
    }
    Json out{{"edges", std::move(list)}, {"expected_causes", expected_causes}};
    if (expected_anomaly) {
        out["expected_anomaly"] = {{"time", expected_anomaly->time},
                                   {"index", expected_anomaly->index},
                                   {"z_score", expected_anomaly->z_score}};
    } else {
        out["expected_anomaly"] = nullptr;
    }
    return out;
}

std::string frame_csv(const TimeSeriesFrame& frame) {
    std::string out = "timestamp";
    for (const auto& ch : frame.channels) out += "," + ch.id;
    out += '\n';
    char buf[40];
    for (std::size_t i = 0; i < frame.length(); ++i) {
        out += format_iso8601(frame.time_at(i));
        for (const auto& ch : frame.channels) {
            std::snprintf(buf, sizeof buf, ",%.17g", ch.values[i]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace insight
