#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cphmm {

/// Failure categories raised by the library. The CLI maps each category onto
/// an exit code (see `exit_code_for`).
enum class ErrorCode {
  // data errors
  MissingExecution,
  ShapeError,
  ParseError,
  LengthError,
  IoError,
  ModelLoadError,
  AlphabetMismatch,
  SymbolOutOfRange,
  IncompleteGrid,
  // configuration / parameter errors
  ConfigError,
  SpecError,
  ParamError,
  // compute errors
  ZeroVariance,
  DegenerateInput,
  EmptyInput,
  EmptyTrainingSet,
  EmptyModelSet,
  NonFinite,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// 2 = configuration, 3 = data, 4 = compute.
int exit_code_for(ErrorCode code) noexcept;

}  // namespace cphmm
