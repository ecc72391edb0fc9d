#include "insight/error.hpp"

namespace insight {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MissingTimestampColumn: return "MissingTimestampColumn";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::InvalidTimestamp: return "InvalidTimestamp";
    case ErrorCode::AllMissingChannel: return "AllMissingChannel";
    case ErrorCode::AllChannelsDropped: return "AllChannelsDropped";
    case ErrorCode::UnknownChannel: return "UnknownChannel";
    case ErrorCode::ZeroVarianceTarget: return "ZeroVarianceTarget";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::SingularDesign: return "SingularDesign";
    case ErrorCode::ConstantSeries: return "ConstantSeries";
    case ErrorCode::InvalidDegreesOfFreedom: return "InvalidDegreesOfFreedom";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::NoEligibleChannels: return "NoEligibleChannels";
    case ErrorCode::InvalidGraph: return "InvalidGraph";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::EmptyCauseList: return "EmptyCauseList";
    case ErrorCode::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::MalformedResponse: return "MalformedResponse";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DuplicateAnnotationTime: return "DuplicateAnnotationTime";
    case ErrorCode::EmptyTruth: return "EmptyTruth";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorKind kind_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSpec:
        return ErrorKind::Config;
    case ErrorCode::RemoteUnavailable:
    case ErrorCode::MalformedResponse:
        return ErrorKind::Remote;
    default:
        return ErrorKind::Data;
    }
}

Error::Error(std::string_view module, ErrorCode code, const std::string& detail)
    : std::runtime_error("[" + std::string(module) + "] " + std::string(to_string(code)) +
                         (detail.empty() ? std::string() : ": " + detail)),
      module_(module),
      code_(code),
      detail_(detail) {}

}  // namespace insight
