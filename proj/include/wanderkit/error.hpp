#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wanderkit {

enum class ErrorCode {
  kInvalidArgument,   // precondition violated by the caller
  kDegenerateGeometry,
  kUndefinedMetric,
  kParse,             // malformed input file
  kIo,
  kEmptyNavMesh,
  kUnreachable,
  kInvalidEndpoint,
  kSamplingFailure,
  kHarness,           // external policy failed
};

std::string_view ToString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void Require(bool condition, const std::string& message) {
  if (!condition) Fail(ErrorCode::kInvalidArgument, message);
}

}  // namespace wanderkit
