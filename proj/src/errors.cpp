#include "duhamel/errors.hpp"

namespace duhamel {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::divergent_moment: return "DivergentMoment";
    case Errc::not_tempered: return "NotTempered";
    case Errc::split_too_small: return "SplitTooSmall";
    case Errc::ball_exceeds_domain: return "BallExceedsDomain";
    case Errc::kernel_not_integrable: return "KernelNotIntegrable";
    case Errc::cfl_violation: return "CflViolation";
    case Errc::domain_too_small: return "DomainTooSmall";
    case Errc::spectral_negativity: return "SpectralNegativity";
    case Errc::time_out_of_range: return "TimeOutOfRange";
    case Errc::snapshot_mismatch: return "SnapshotMismatch";
    case Errc::test_function_touches_boundary: return "TestFunctionTouchesBoundary";
    case Errc::grid_mismatch: return "GridMismatch";
    case Errc::bad_argument: return "BadArgument";
    case Errc::config_error: return "ConfigError";
    case Errc::numerical_failure: return "NumericalFailure";
  }
  return "Error";
}

}  // namespace duhamel
