#include "insight/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"

#include "insight/config.hpp"
#include "insight/error.hpp"
#include "insight/metrics.hpp"
#include "insight/pipeline.hpp"
#include "insight/serialize.hpp"
#include "insight/synth.hpp"

namespace insight {
namespace {

struct CommonArgs {
    std::string csv;
    std::string config;
    std::string timestamp_col;
    std::string target;
    std::size_t workers = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("csv", a.csv, "Telemetry CSV")->required();
    cmd->add_option("--config", a.config, "JSON run configuration");
    cmd->add_option("--timestamp-col", a.timestamp_col, "Timestamp column name (default: timestamp)");
    cmd->add_option("--target", a.target, "Target channel (default: energy)");
    cmd->add_option("--workers", a.workers, "Worker threads (default: config value)");
}

// Config first, then flag overrides, then environment; validated before any data is read.
RunConfig resolve_config(const CommonArgs& a) {
    RunConfig cfg = a.config.empty() ? RunConfig{} : load_config(a.config);
    if (!a.timestamp_col.empty()) cfg.timestamp_column = a.timestamp_col;
    if (!a.target.empty()) cfg.anomaly.target_channel = a.target;
    if (a.workers > 0) cfg.workers = a.workers;
    cfg.anomaly.history_length = cfg.window.window_length;
    apply_environment(cfg);
    cfg.validate();
    return cfg;
}

RawFrame read_csv(const std::string& path, const std::string& timestamp_col) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("ingest", ErrorCode::IoError, "cannot open '" + path + "'");
    return parse_csv(in, timestamp_col);
}

Json read_json(const std::string& path, std::string_view module) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(module, ErrorCode::IoError, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Json j = Json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw Error(module, ErrorCode::InvalidArgument, "'" + path + "' is not valid JSON");
    return j;
}

int exit_code_for(const Error& e) {
    switch (kind_of(e.code())) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Remote: return kExitRemote;
    case ErrorKind::Data: return kExitData;
    }
    return kExitData;
}

void configure_logging(const std::string& level) {
    auto logger = spdlog::get("insight");
    if (!logger) {
        logger = spdlog::stderr_color_mt("insight");
        spdlog::set_default_logger(logger);
    }
    spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal explanations for anomalies in building telemetry", "insight"};
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")->capture_default_str();

    CommonArgs run_args;
    std::string out_dir = "out";
    bool ci_only = false;
    bool template_only = false;
    auto* run = app.add_subcommand("run", "Detect, discover, rank and explain every anomaly");
    add_common(run, run_args);
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run->add_flag("--ci-only", ci_only, "Emit ranked causes without explanation text");
    run->add_flag("--template-only", template_only, "Never call the remote endpoint");

    CommonArgs detect_args;
    auto* detect = app.add_subcommand("detect", "Print detected anomalies as JSON");
    add_common(detect, detect_args);

    CommonArgs explain_args;
    std::string anomaly_time;
    bool explain_template_only = false;
    bool explain_ci_only = false;
    auto* explain = app.add_subcommand("explain", "Explain one anomaly anchored at a given time");
    add_common(explain, explain_args);
    explain->add_option("--anomaly-time", anomaly_time, "ISO-8601 or epoch seconds on the resampled grid")->required();
    explain->add_flag("--template-only", explain_template_only, "Never call the remote endpoint");
    explain->add_flag("--ci-only", explain_ci_only, "Emit ranked causes without explanation text");

    std::string spec_path;
    std::string synth_out = "synth_out";
    std::optional<std::uint64_t> seed;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario CSV and its ground truth");
    synth->add_option("--spec", spec_path, "JSON synth/scenario spec (default: built-in occupancy scenario)");
    synth->add_option("--out", synth_out, "Output directory")->capture_default_str();
    synth->add_option("--seed", seed, "Override the scenario seed");

    std::string predictions_path;
    std::string annotations_path;
    std::int64_t tolerance = 0;
    std::string format = "json";
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score predicted causes against annotations");
    evaluate_cmd->add_option("--predictions", predictions_path, "causes.json written by `run`")->required();
    evaluate_cmd->add_option("--annotations", annotations_path, "Annotation JSON list")->required();
    evaluate_cmd->add_option("--tolerance", tolerance, "Matching tolerance in seconds")->capture_default_str();
    evaluate_cmd->add_option("--format", format, "json|table")
        ->check(CLI::IsMember({"json", "table"}))
        ->capture_default_str();

    std::vector<const char*> argv{"insight"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        configure_logging(log_level);

        if (run->parsed()) {
            const RunConfig cfg = resolve_config(run_args);
            if (cfg.remote && !template_only) {
                spdlog::info("remote explanations from {}", cfg.remote->url);
            }
            const RawFrame raw = read_csv(run_args.csv, cfg.timestamp_column);
            const PipelineResult result = run_pipeline(raw, cfg, {cfg.workers, ci_only, template_only});
            write_outputs(result, cfg, out_dir);
            out << dump(Json{{"anomalies", result.anomalies.size()},
                             {"explained", result.reports.size()},
                             {"skipped", result.skipped},
                             {"dropped_channels", result.preprocessed.dropped},
                             {"out", out_dir}});
            return kExitOk;
        }
        if (detect->parsed()) {
            const RunConfig cfg = resolve_config(detect_args);
            const RawFrame raw = read_csv(detect_args.csv, cfg.timestamp_column);
            const PreprocessResult pre = preprocess(raw, cfg.preprocess);
            out << dump(anomalies_json(detect_anomalies(pre.frame, cfg.anomaly)));
            return kExitOk;
        }
        if (explain->parsed()) {
            const RunConfig cfg = resolve_config(explain_args);
            const auto t = parse_timestamp(anomaly_time);
            if (!t) throw Error("cli", ErrorCode::InvalidArgument, "--anomaly-time: cannot parse '" + anomaly_time + "'");
            const RawFrame raw = read_csv(explain_args.csv, cfg.timestamp_column);
            const PreprocessResult pre = preprocess(raw, cfg.preprocess);
            const auto index = pre.frame.index_at(*t);
            if (!index) {
                throw Error("cli", ErrorCode::InvalidArgument,
                            "--anomaly-time: " + format_iso8601(*t) + " is not a grid point of the resampled frame");
            }
            const AnomalyEvent ev = event_at(pre.frame, cfg.anomaly.target_channel, *index, cfg.window.window_length);
            const AnomalyReport r =
                explain_anomaly(pre.frame, ev, cfg, {cfg.workers, explain_ci_only, explain_template_only}, cfg.workers);
            out << dump(explanation_json(r.explanation, cfg.anomaly.target_channel, ev.time, r.prompt));
            return kExitOk;
        }
        if (synth->parsed()) {
            ScenarioSpec spec = spec_path.empty() ? default_scenario(0) : scenario_spec_from_json(read_json(spec_path, "synth"));
            if (seed) spec.base.seed = *seed;
            const ScenarioOutput s = build_scenario(spec);
            std::error_code ec;
            std::filesystem::create_directories(synth_out, ec);
            if (ec) throw Error("synth", ErrorCode::IoError, "cannot create '" + synth_out + "': " + ec.message());
            const auto root = std::filesystem::path(synth_out);
            write_file_atomic((root / "data.csv").string(), frame_csv(s.frame));
            write_file_atomic((root / "ground_truth.json").string(),
                              dump(ground_truth_json(spec.base.edges, s.expected_causes, s.expected_anomaly)));
            out << dump(Json{{"csv", (root / "data.csv").string()},
                             {"ground_truth", (root / "ground_truth.json").string()},
                             {"rows", s.frame.length()}});
            return kExitOk;
        }
        if (evaluate_cmd->parsed()) {
            const auto truth = annotations_from_json(read_json(annotations_path, "metrics"));
            const auto predictions = predictions_from_json(read_json(predictions_path, "metrics"));
            const EvaluationReport report = evaluate(predictions, truth, tolerance);
            out << (format == "table" ? format_report_table(report) : dump(report_json(report)));
            return kExitOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitConfig;
}

}  // namespace insight
