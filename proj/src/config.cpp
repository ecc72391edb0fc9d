#include "insight/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "insight/error.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "config";

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw Error(kModule, ErrorCode::InvalidConfig, path + ": " + what);
}

// Reads typed fields out of one JSON object and rejects keys nobody asked for.
class Section {
public:
    Section(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) bad(path_, "expected an object");
    }

    template <typename T>
    void read(const char* key, T& out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) return;
        const std::string p = child(key);
        if constexpr (std::is_same_v<T, bool>) {
            if (!it->is_boolean()) bad(p, "expected a boolean");
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!it->is_string()) bad(p, "expected a string");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!it->is_number()) bad(p, "expected a number");
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!it->is_number_integer() || it->template get<std::int64_t>() < 0) bad(p, "expected a non-negative integer");
        } else {
            if (!it->is_number_integer()) bad(p, "expected an integer");
        }
        out = it->template get<T>();
    }

    const Json* sub(const char* key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) bad(child(key), "unknown key");
        }
    }

private:
    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Re-raises a module validation error as a config error; messages already carry the field path.
template <typename Fn>
void checked(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        throw Error(kModule, ErrorCode::InvalidConfig, e.detail());
    }
}

}  // namespace

void RunConfig::validate() const {
    checked([&] { preprocess.validate(); });
    checked([&] { anomaly.validate(); });
    checked([&] { window.validate(); });
    checked([&] { prune.validate(); });
    if (rank_k < 1) bad("rank_k", "must be >= 1");
    if (workers < 1) bad("workers", "must be >= 1");
    if (remote) checked([&] { remote->validate(); });
    if (timestamp_column.empty()) bad("timestamp_column", "must be non-empty");
}

RunConfig config_from_json(const Json& j) {
    RunConfig cfg;
    Section root(j, "");
    root.read("timestamp_column", cfg.timestamp_column);
    root.read("workers", cfg.workers);
    root.read("rank_k", cfg.rank_k);

    if (const Json* p = root.sub("preprocess")) {
        Section s(*p, "preprocess");
        s.read("interval", cfg.preprocess.interval);
        s.read("max_ffill_gap", cfg.preprocess.max_ffill_gap);
        s.read("max_missing_fraction", cfg.preprocess.max_missing_fraction);
        s.finish();
    }
    if (const Json* p = root.sub("anomaly")) {
        Section s(*p, "anomaly");
        s.read("z_threshold", cfg.anomaly.z_threshold);
        s.read("target_channel", cfg.anomaly.target_channel);
        s.read("merge_adjacent", cfg.anomaly.merge_adjacent);
        s.finish();
    }
    if (const Json* p = root.sub("window")) {
        Section s(*p, "window");
        s.read("window_length", cfg.window.window_length);
        s.read("lag", cfg.window.lag);
        std::string selection = cfg.window.lag_selection == LagSelection::Bic ? "bic" : "fixed";
        s.read("lag_selection", selection);
        if (selection == "fixed") {
            cfg.window.lag_selection = LagSelection::Fixed;
        } else if (selection == "bic") {
            cfg.window.lag_selection = LagSelection::Bic;
        } else {
            bad("window.lag_selection", "expected \"fixed\" or \"bic\"");
        }
        s.read("p_max", cfg.window.p_max);
        s.read("alpha", cfg.window.alpha);
        s.read("include_intercept", cfg.window.include_intercept);
        s.read("allow_shrink", cfg.window.allow_shrink);
        s.finish();
    }
    if (const Json* p = root.sub("prune")) {
        Section s(*p, "prune");
        s.read("factor", cfg.prune.factor);
        s.finish();
    }
    if (const Json* p = root.sub("remote")) {
        Section s(*p, "remote");
        RemoteConfig r;
        s.read("url", r.url);
        s.read("max_tokens", r.max_tokens);
        s.read("timeout_seconds", r.timeout_seconds);
        s.read("retries", r.retries);
        s.read("backoff_seconds", r.backoff_seconds);
        s.read("fallback", r.fallback);
        s.finish();
        cfg.remote = r;
    }
    if (const Json* p = root.sub("explain")) {
        Section s(*p, "explain");
        bool use_defaults = true;
        s.read("use_default_actions", use_defaults);
        std::string fallback = ActionCatalog::defaults().fallback_action();
        s.read("fallback_action", fallback);

        std::vector<ActionCatalog::Rule> rules;
        if (const Json* actions = s.sub("actions")) {
            if (!actions->is_array()) bad("explain.actions", "expected an array");
            for (std::size_t i = 0; i < actions->size(); ++i) {
                Section a((*actions)[i], "explain.actions[" + std::to_string(i) + "]");
                ActionCatalog::Rule rule;
                a.read("pattern", rule.pattern);
                a.read("action", rule.action);
                a.finish();
                if (rule.pattern.empty() || rule.action.empty()) {
                    bad("explain.actions[" + std::to_string(i) + "]", "pattern and action are required");
                }
                rules.push_back(std::move(rule));
            }
        }
        if (use_defaults) {
            for (const auto& r : ActionCatalog::defaults().rules()) rules.push_back(r);
        }

        std::map<std::string, std::string> aliases;
        if (const Json* al = s.sub("aliases")) {
            if (!al->is_object()) bad("explain.aliases", "expected an object");
            for (const auto& [key, value] : al->items()) {
                if (!value.is_string()) bad("explain.aliases." + key, "expected a string");
                aliases[key] = value.get<std::string>();
            }
        }
        s.finish();
        cfg.catalog = ActionCatalog(std::move(rules), std::move(fallback), std::move(aliases));
    }
    root.finish();
    cfg.anomaly.history_length = cfg.window.window_length;
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, ErrorCode::IoError, "cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const Json j = Json::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) bad(path, "not valid JSON");
    return config_from_json(j);
}

void apply_environment(RunConfig& cfg) {
    if (const auto url = remote_url_from_env()) {
        if (!cfg.remote) cfg.remote = RemoteConfig{};
        cfg.remote->url = *url;
    }
}

}  // namespace insight
