#include "fkpp/error.hpp"

namespace fkpp {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::OrderExceeded: return "order-exceeded";
        case ErrorKind::OutOfWindow: return "out-of-window";
        case ErrorKind::FocalPoint: return "focal-point";
        case ErrorKind::SignCondition: return "sign-condition";
        case ErrorKind::NumericFailure: return "numeric-failure";
        case ErrorKind::GridTooNarrow: return "grid-too-narrow";
        case ErrorKind::TruncationCap: return "truncation-cap";
        case ErrorKind::Config: return "config";
    }
    return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> at_time)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      time_(at_time) {}

void fail(ErrorKind kind, const std::string& message, std::optional<double> at_time) {
    throw Error(kind, message, at_time);
}

}  // namespace fkpp
