#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace insight {

enum class ErrorCode {
    // ingest
    EmptyInput,
    MissingTimestampColumn,
    NonMonotonicTimestamps,
    InvalidTimestamp,
    AllMissingChannel,
    AllChannelsDropped,
    // anomaly
    UnknownChannel,
    ZeroVarianceTarget,
    // granger
    TooShort,
    SingularDesign,
    ConstantSeries,
    InvalidDegreesOfFreedom,
    WindowTooShort,
    NoEligibleChannels,
    // causal_graph
    InvalidGraph,
    UnknownTarget,
    // explain
    EmptyCauseList,
    RemoteUnavailable,
    MalformedResponse,
    // synth
    InvalidSpec,
    // metrics
    DuplicateAnnotationTime,
    EmptyTruth,
    // config / cli
    InvalidConfig,
    InvalidArgument,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Broad failure class, used by the CLI to pick an exit status.
enum class ErrorKind { Config, Data, Remote };

ErrorKind kind_of(ErrorCode code);

/// Every failure raised by the library. The message is tagged with the module
/// that raised it, e.g. "[granger] TooShort: need at least 12 samples".
class Error : public std::runtime_error {
public:
    Error(std::string_view module, ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }
    const std::string& module() const noexcept { return module_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string module_;
    ErrorCode code_;
    std::string detail_;
};

}  // namespace insight
