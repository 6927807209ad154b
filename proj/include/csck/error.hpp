#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace csck {

enum class ErrorCode {
  InvalidArgument,
  ZeroPoly,
  IllConditioned,
  NotKahler,
  NotCsck,
  EndpointSample,
  UnsupportedMultiplicity,
  OutOfDomain,
  BadAnchor,
  NotNormalizable,
  DomainEnd,
  ConstraintViolation,
  NotClassified,
  UnknownCase,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ZeroPoly: return "ZeroPoly";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::NotKahler: return "NotKahler";
    case ErrorCode::NotCsck: return "NotCsck";
    case ErrorCode::EndpointSample: return "EndpointSample";
    case ErrorCode::UnsupportedMultiplicity: return "UnsupportedMultiplicity";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::BadAnchor: return "BadAnchor";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::DomainEnd: return "DomainEnd";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::NotClassified: return "NotClassified";
    case ErrorCode::UnknownCase: return "UnknownCase";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code. `value()` holds an attached
/// number where one is meaningful (a residual, a spread, the s reached).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<double> value = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        message_(what),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<double> value() const noexcept { return value_; }
  /// what() without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<double> value_;
};

}  // namespace csck
