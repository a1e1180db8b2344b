#include "amusic/error.hpp"

namespace amusic {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::TruncatedFile: return "TruncatedFile";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::BadImage: return "BadImage";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MixedQueryIndices: return "MixedQueryIndices";
    case ErrorCode::UnnormalizedStream: return "UnnormalizedStream";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::EmptyCoverage: return "EmptyCoverage";
    case ErrorCode::WindowIncomplete: return "WindowIncomplete";
    case ErrorCode::BufferUnderrun: return "BufferUnderrun";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::InvalidDof: return "InvalidDof";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::CountOutOfRange: return "CountOutOfRange";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::MalformedLog: return "MalformedLog";
  }
  return "Unknown";
}

}  // namespace amusic
