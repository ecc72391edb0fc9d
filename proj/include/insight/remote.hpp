#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "insight/error.hpp"
#include "insight/explain.hpp"

namespace insight {

/// Generic completion endpoint: POST {"prompt", "max_tokens"} -> {"text"}.
struct RemoteConfig {
    std::string url;  // http://host:port/path
    int max_tokens = 256;
    double timeout_seconds = 30.0;
    int retries = 2;
    double backoff_seconds = 0.5;  // doubles after every failed attempt
    bool fallback = true;

    void validate() const;
};

/// Value of INSIGHT_REMOTE_URL, if set and non-empty.
std::optional<std::string> remote_url_from_env();

struct RemoteOutcome {
    Explanation explanation;
    /// Set when the remote path failed and the fallback was used.
    std::optional<ErrorCode> error;
    std::string error_detail;
    int attempts = 0;
};

/// Transport failures and 5xx responses are retried; other statuses and
/// malformed bodies are not. On final failure the `fallback` renderer is used
/// (source = template) unless disabled, in which case the error is thrown.
RemoteOutcome request_remote_explanation(const ExplanationPrompt& prompt, const std::vector<DirectedCause>& causes,
                                         const RemoteConfig& cfg, const std::function<Explanation()>& fallback);

}  // namespace insight
