#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace fkpp {

enum class ErrorKind {
    InvalidArgument,
    OrderExceeded,
    OutOfWindow,
    FocalPoint,
    SignCondition,
    NumericFailure,
    GridTooNarrow,
    TruncationCap,
    Config,
};

const char* to_string(ErrorKind kind) noexcept;

/// Structured failure report. `time()` carries the time reached when the
/// failure is tied to a time integration or a validity window.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message,
          std::optional<double> at_time = std::nullopt);

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<double> time() const noexcept { return time_; }

private:
    ErrorKind kind_;
    std::optional<double> time_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message,
                       std::optional<double> at_time = std::nullopt);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

}  // namespace fkpp
