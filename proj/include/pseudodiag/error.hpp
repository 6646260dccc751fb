#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pseudodiag {

enum class ErrorCode {
  InvalidArgument,
  MalformedHeader,
  MalformedRow,
  EmptyDocument,
  InvalidGraph,
  TooFewNodes,
  TooFewElements,
  SyntaxError,
  UnknownNodeReference,
  DuplicateNodeId,
  DuplicateEdge,
  UnknownId,
  OverlapUnresolvable,
  NoEdges,
  DegenerateNegative,
  IndistinguishableSwap,
  TooFewLabels,
  ZeroVector,
  BatchTooSmall,
  NoSamples,
  EmptyItem,
  DimensionMismatch,
  Io,
  Unsupported,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the library is an Error carrying a code; the C API
// maps codes onto pd_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Parse failures in diagram code. line/column are 1-based.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, std::size_t column,
             std::string expected, const std::string& message)
      : Error(code, message),
        line_(line),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

}  // namespace pseudodiag
