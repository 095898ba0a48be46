#pragma once

#include <stdexcept>
#include <string>

namespace duhamel {

enum class Errc {
  divergent_moment,
  not_tempered,
  split_too_small,
  ball_exceeds_domain,
  kernel_not_integrable,
  cfl_violation,
  domain_too_small,
  spectral_negativity,
  time_out_of_range,
  snapshot_mismatch,
  test_function_touches_boundary,
  grid_mismatch,
  bad_argument,
  config_error,
  numerical_failure,
};

const char* errc_name(Errc c);

/// Library-wide exception. `code()` identifies the failure class so the CLI
/// can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace duhamel
