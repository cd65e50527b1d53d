#include "noiselab/errors.hpp"

namespace noiselab {

void throw_error(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::size_limit: return "size limit exceeded";
    case ErrorCode::numeric: return "numeric failure";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace noiselab
