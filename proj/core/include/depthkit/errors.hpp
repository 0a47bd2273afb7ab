#pragma once

#include <stdexcept>
#include <string>

namespace depthkit {

enum class ErrorCode {
  invalid_argument,
  empty_mask,
  insufficient_data,
  behind_camera,
  empty_pattern,
  io,
  magic_mismatch,
  truncated_file,
  all_invalid,
  range,
  parse,
  invalid_depth,
};

/// Library-wide exception. Every failure mode carries a stable ErrorCode so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::empty_mask: return "empty_mask";
    case ErrorCode::insufficient_data: return "insufficient_data";
    case ErrorCode::behind_camera: return "behind_camera";
    case ErrorCode::empty_pattern: return "empty_pattern";
    case ErrorCode::io: return "io";
    case ErrorCode::magic_mismatch: return "magic_mismatch";
    case ErrorCode::truncated_file: return "truncated_file";
    case ErrorCode::all_invalid: return "all_invalid";
    case ErrorCode::range: return "range";
    case ErrorCode::parse: return "parse";
    case ErrorCode::invalid_depth: return "invalid_depth";
  }
  return "unknown";
}

}  // namespace depthkit
