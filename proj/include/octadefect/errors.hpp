#pragma once

#include <stdexcept>
#include <string>

namespace octadefect {

// Values double as CLI exit codes.
enum class ErrorKind : int {
  invalid_input = 2,
  guard_exceeded = 3,
  not_square_free = 4,
  property_violation = 5,
  sampling_infeasible = 6,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid_input";
    case ErrorKind::guard_exceeded: return "guard_exceeded";
    case ErrorKind::not_square_free: return "not_square_free";
    case ErrorKind::property_violation: return "property_violation";
    case ErrorKind::sampling_infeasible: return "sampling_infeasible";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::invalid_input, what);
}

// A theorem-guaranteed property failed; this indicates a bug, never bad input.
inline void ensure(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::property_violation, what);
}

}  // namespace octadefect
