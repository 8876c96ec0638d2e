#pragma once

#include <stdexcept>
#include <string>

namespace rrc {

enum class ErrorCode {
  InvalidArgument,
  NotMultiple,
  DegreeOutOfRange,
  ThresholdOutOfRange,
  NonInvertible,
  SingularMatrix,
  InvalidPoints,
  FieldTooSmall,
  NotConstructible,
  HomogeneousUseMsr,
  SearchFailed,
  UnsupportedRegime,
  UnsupportedRepairTarget,
  InvalidHelpers,
  InvalidScenario,
  BelowMinimumBandwidth,
  BadInput,
  DecodeFailed,
  NeedSearch,
  CorruptChunk,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as an Error carrying one of the codes
// above; the C API maps the code one-to-one onto rrc_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace rrc
