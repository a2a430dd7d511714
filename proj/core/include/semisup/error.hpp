#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace semisup {

enum class ErrorCode {
  MissingClass,
  TooFewPerClass,
  DimensionMismatch,
  InvalidModel,
  EmptyInput,
  ShapeMismatch,
  PriorMismatch,
  ParseError,
  NotTwoClass,
  UnknownDataset,
  InvalidSpec,
  InvalidConfig,
  RedrawLimitExceeded,
  UnknownMetric,
  MalformedCsv,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace semisup
