#pragma once

#include <stdexcept>
#include <string>

namespace raycensus {

enum class ErrorCode {
  invalid_argument = 1,
  parse = 2,
  singular_hit = 3,
  on_arc = 4,
  precondition = 5,
  numeric = 6,
};

// Every failure the core reports to callers goes through this type; the C API
// maps `code()` onto rc_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace raycensus
