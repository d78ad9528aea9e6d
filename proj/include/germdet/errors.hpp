#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace germdet {

enum class ErrorCode {
  MismatchedContext,
  IndexOutOfRange,
  NonLocalSubstitution,
  DivisionByZero,
  ParseError,
  UnknownVariable,
  UnsupportedCombination,
  InvalidChain,
  CapTooSmall,
  UnsupportedFiltration,
  CharacteristicObstruction,
  WrongCharacteristic,
  NotInTangent,
  TooLarge,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// All engine failures are reported through this type. `code()` is the
// machine-readable tag surfaced in reports.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures carry a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::ParseError, message), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace germdet
