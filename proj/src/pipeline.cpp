#include "insight/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <spdlog/spdlog.h>

#include "insight/error.hpp"
#include "insight/parallel.hpp"
#include "insight/remote.hpp"
#include "insight/serialize.hpp"

namespace insight {

AnomalyReport explain_anomaly(const TimeSeriesFrame& frame, const AnomalyEvent& event, const RunConfig& cfg,
                              const RunOptions& opts, std::size_t discovery_workers) {
    const std::string& target = cfg.anomaly.target_channel;

    AnomalyReport report;
    report.event = event;
    report.discovery = discover_graph(frame, event, cfg.window, discovery_workers);
    report.pruned = prune(report.discovery.graph, cfg.prune);
    report.causes = rank_causes(report.pruned, target, cfg.rank_k);

    const std::size_t baseline = report.discovery.end_index - report.discovery.start_index;
    report.directed = annotate_causes(report.causes, frame, event, baseline);

    if (opts.ci_only) {
        report.explanation = {"", ExplanationSource::None, report.directed};
        if (!report.directed.empty()) report.prompt = build_prompt(report.directed).text;
        return report;
    }
    if (report.directed.empty()) {
        report.explanation.source = ExplanationSource::Template;
        report.explanation.text = "No significant causal driver of " + cfg.catalog.display_name(target) + " at " +
                                  format_iso8601(event.time) + " was found in the preceding window.";
        return report;
    }

    report.prompt = build_prompt(report.directed).text;
    const auto render = [&] { return render_template(report.directed, target, event, cfg.catalog); };
    if (cfg.remote && !opts.template_only) {
        RemoteOutcome outcome = request_remote_explanation({report.prompt}, report.directed, *cfg.remote, render);
        report.explanation = std::move(outcome.explanation);
        if (outcome.error) report.remote_error = std::string(to_string(*outcome.error)) + ": " + outcome.error_detail;
    } else {
        report.explanation = render();
    }
    return report;
}

PipelineResult run_pipeline(const RawFrame& raw, const RunConfig& cfg_in, const RunOptions& opts) {
    RunConfig cfg = cfg_in;
    cfg.anomaly.history_length = cfg.window.window_length;
    cfg.validate();

    PipelineResult result;
    result.preprocessed = preprocess(raw, cfg.preprocess);
    const TimeSeriesFrame& frame = result.preprocessed.frame;
    for (const auto& id : result.preprocessed.dropped) spdlog::warn("dropped sparse channel '{}'", id);

    result.anomalies = detect_anomalies(frame, cfg.anomaly);
    spdlog::info("{} anomalies detected on '{}'", result.anomalies.size(), cfg.anomaly.target_channel);

    std::vector<std::optional<AnomalyReport>> slots(result.anomalies.size());
    std::vector<std::string> skip_reason(result.anomalies.size());
    parallel_for(result.anomalies.size(), opts.workers, [&](std::size_t i) {
        const AnomalyEvent& ev = result.anomalies[i];
        if (ev.short_window && !cfg.window.allow_shrink) {
            skip_reason[i] = format_iso8601(ev.time) + ": fewer than " + std::to_string(cfg.window.window_length) +
                             " intervals of history";
            return;
        }
        slots[i] = explain_anomaly(frame, ev, cfg, opts);
    });

    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i]) {
            result.reports.push_back(std::move(*slots[i]));
        } else {
            spdlog::warn("skipped anomaly {}", skip_reason[i]);
            result.skipped.push_back(std::move(skip_reason[i]));
        }
    }
    return result;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cli", ErrorCode::IoError, "cannot write '" + tmp + "'");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error("cli", ErrorCode::IoError, "short write to '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cli", ErrorCode::IoError, "cannot rename '" + tmp + "': " + ec.message());
}

void write_outputs(const PipelineResult& result, const RunConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    std::error_code ec;
    fs::create_directories(root / "graphs", ec);
    fs::create_directories(root / "explanations", ec);
    if (ec) throw Error("cli", ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());

    write_file_atomic((root / "anomalies.json").string(), dump(anomalies_json(result.anomalies)));

    Json causes = Json::array();
    for (const auto& r : result.reports) {
        const std::string stem = format_compact(r.event.time) + ".json";
        write_file_atomic((root / "graphs" / stem).string(),
                          dump(graph_json(cfg.anomaly.target_channel, r.discovery, r.pruned)));
        write_file_atomic((root / "explanations" / stem).string(),
                          dump(explanation_json(r.explanation, cfg.anomaly.target_channel, r.event.time, r.prompt)));
        causes.push_back(cause_set_json(r.causes, r.event.time));
    }
    write_file_atomic((root / "causes.json").string(), dump(causes));
}

}  // namespace insight
