#include "qgraph/error.hpp"

namespace qgraph {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::construction_failure: return "construction-failure";
    case Errc::convergence_failure: return "convergence-failure";
    case Errc::ill_conditioned_resolvent: return "ill-conditioned-resolvent";
    case Errc::internal_consistency: return "internal-consistency";
    case Errc::spectral_inconsistency: return "spectral-inconsistency";
    case Errc::not_invertible: return "not-invertible";
    case Errc::invalid_coset_point: return "invalid-coset-point";
    case Errc::action_undefined: return "action-undefined";
    case Errc::rescale_required: return "rescale-required";
    case Errc::invalid_pattern: return "invalid-pattern";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

}  // namespace qgraph
