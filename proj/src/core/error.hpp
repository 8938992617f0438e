#pragma once

#include <stdexcept>
#include <string>

namespace mmds {

enum class ErrorCode {
  parse,
  metric_violation,
  weight,
  disconnected_graph,
  invalid_spec,
  not_homogeneous,
  convergence_failure,
  rank_too_large,
  dimension_too_large,
  mode_mismatch,
  domain,
  overflow,
  parity,
  no_convergence,
  marginal_mismatch,
  too_large_to_enumerate,
  kernel_assumption_unmet,
  bad_argument,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace mmds
