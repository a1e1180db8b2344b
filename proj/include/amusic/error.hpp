#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace amusic {

enum class ErrorCode {
  InvalidArgument,
  ShapeMismatch,
  IndexOutOfRange,
  BadMagic,
  UnsupportedFormat,
  TruncatedFile,
  NonFiniteValue,
  ZeroVector,
  ImageTooSmall,
  BadImage,
  IoError,
  MixedQueryIndices,
  UnnormalizedStream,
  EmptyWindow,
  EmptyCoverage,
  WindowIncomplete,
  BufferUnderrun,
  LengthMismatch,
  TooFewSamples,
  InvalidDof,
  MissingGroundTruth,
  CountOutOfRange,
  ConfigError,
  MalformedLog,
};

std::string_view to_string(ErrorCode code);

/// Every failure in the library surfaces as this exception; `code()` tells them apart.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Configuration problem attributable to one named field.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(ErrorCode::ConfigError, field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace amusic
