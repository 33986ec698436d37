#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fracground {

// Machine-readable failure categories. The CLI prints code_name() verbatim.
enum class ErrorCode {
  invalid_argument,
  grid_too_large,
  io,
  bad_magic,
  version_mismatch,
  bad_header,
  truncated,
  trailing_data,
  support_outside_box,
  zeta_below_min,
  no_positive_constraint,
  not_radial_decreasing,
  degenerate_multiplier,
  supercritical,
  divergence,
  constraint_escape,
  petviashvili_failed,
  unresolved_grid,
  config,
};

constexpr std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::grid_too_large: return "grid_too_large";
    case ErrorCode::io: return "io";
    case ErrorCode::bad_magic: return "bad_magic";
    case ErrorCode::version_mismatch: return "version_mismatch";
    case ErrorCode::bad_header: return "bad_header";
    case ErrorCode::truncated: return "truncated";
    case ErrorCode::trailing_data: return "trailing_data";
    case ErrorCode::support_outside_box: return "support_outside_box";
    case ErrorCode::zeta_below_min: return "zeta_below_min";
    case ErrorCode::no_positive_constraint: return "no_positive_constraint";
    case ErrorCode::not_radial_decreasing: return "not_radial_decreasing";
    case ErrorCode::degenerate_multiplier: return "degenerate_multiplier";
    case ErrorCode::supercritical: return "supercritical";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::constraint_escape: return "constraint_escape";
    case ErrorCode::petviashvili_failed: return "petviashvili_failed";
    case ErrorCode::unresolved_grid: return "unresolved_grid";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

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

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace fracground
