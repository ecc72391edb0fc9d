#include "insight/remote.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <spdlog/spdlog.h>

#include "httplib.h"
#include "json.hpp"

namespace insight {
namespace {

constexpr std::string_view kModule = "explain";

struct Endpoint {
    std::string base;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0) {
        throw Error(kModule, ErrorCode::InvalidConfig, "remote.url: only http:// endpoints are supported");
    }
    const auto slash = url.find('/', scheme.size());
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

// One attempt. Returns the generated text or throws Error with the failure class;
// `retryable` reports whether another attempt could help.
std::string attempt(httplib::Client& client, const std::string& path, const std::string& body, bool& retryable) {
    retryable = false;
    const auto res = client.Post(path, body, "application/json");
    if (!res) {
        retryable = true;
        throw Error(kModule, ErrorCode::RemoteUnavailable, "transport error: " + httplib::to_string(res.error()));
    }
    if (res->status >= 500) {
        retryable = true;
        throw Error(kModule, ErrorCode::RemoteUnavailable, "HTTP " + std::to_string(res->status));
    }
    if (res->status < 200 || res->status >= 300) {
        throw Error(kModule, ErrorCode::RemoteUnavailable, "HTTP " + std::to_string(res->status));
    }
    const auto parsed = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("text") || !parsed["text"].is_string()) {
        throw Error(kModule, ErrorCode::MalformedResponse, "expected a JSON object with a string 'text' field");
    }
    return parsed["text"].get<std::string>();
}

}  // namespace

void RemoteConfig::validate() const {
    const auto bad = [](const std::string& msg) { throw Error(kModule, ErrorCode::InvalidConfig, msg); };
    if (url.empty()) bad("remote.url: must be set");
    split_url(url);
    if (max_tokens < 1) bad("remote.max_tokens: must be >= 1");
    if (!(timeout_seconds > 0.0)) bad("remote.timeout_seconds: must be > 0");
    if (retries < 0) bad("remote.retries: must be >= 0");
    if (!(backoff_seconds >= 0.0)) bad("remote.backoff_seconds: must be >= 0");
}

std::optional<std::string> remote_url_from_env() {
    const char* v = std::getenv("INSIGHT_REMOTE_URL");
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
}

RemoteOutcome request_remote_explanation(const ExplanationPrompt& prompt, const std::vector<DirectedCause>& causes,
                                         const RemoteConfig& cfg, const std::function<Explanation()>& fallback) {
    cfg.validate();
    const Endpoint ep = split_url(cfg.url);

    httplib::Client client(ep.base);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(cfg.timeout_seconds));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    const std::string body = nlohmann::json{{"prompt", prompt.text}, {"max_tokens", cfg.max_tokens}}.dump();

    RemoteOutcome out;
    std::optional<Error> last_error;
    double backoff = cfg.backoff_seconds;
    for (int i = 0; i <= cfg.retries; ++i) {
        ++out.attempts;
        bool retryable = false;
        try {
            out.explanation.text = attempt(client, ep.path, body, retryable);
            out.explanation.source = ExplanationSource::Remote;
            out.explanation.causes = causes;
            return out;
        } catch (const Error& e) {
            last_error = e;
            spdlog::warn("remote explanation attempt {} failed: {}", out.attempts, e.what());
        }
        if (!retryable || i == cfg.retries) break;
        std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
        backoff *= 2.0;
    }

    if (!cfg.fallback || !fallback) throw *last_error;
    out.error = last_error->code();
    out.error_detail = last_error->detail();
    out.explanation = fallback();
    out.explanation.source = ExplanationSource::Template;
    return out;
}

}  // namespace insight
