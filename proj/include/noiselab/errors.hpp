#pragma once

#include <stdexcept>
#include <string>

namespace noiselab {

enum class ErrorCode {
  invalid_argument = 1,
  validation = 2,
  size_limit = 3,
  numeric = 4,
  io = 5,
};

/// Every failure raised by the library carries one of the codes above; the
/// C API maps them one-to-one onto nl_status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void throw_error(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) throw_error(code, what);
}

const char* to_string(ErrorCode code) noexcept;

}  // namespace noiselab
