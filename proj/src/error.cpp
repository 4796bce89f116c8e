#include "mixer/error.hpp"

namespace mixer {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ok: return "Ok";
    case Errc::internal: return "Internal";
    case Errc::spec_syntax: return "SpecSyntax";
    case Errc::unsupported_parameters: return "UnsupportedParameters";
    case Errc::non_prime_characteristic: return "NonPrimeCharacteristic";
    case Errc::no_irreducible_found: return "NoIrreducibleFound";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::mixed_groups: return "MixedGroups";
    case Errc::no_suitable_prime: return "NoSuitablePrime";
    case Errc::eigensplit_failure: return "EigensplitFailure";
    case Errc::loop_budget_exceeded: return "LoopBudgetExceeded";
    case Errc::arity_mismatch: return "ArityMismatch";
    case Errc::uncovered_probe: return "UncoveredProbe";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_error: return "IoError";
    case Errc::bound_violation: return "BoundViolation";
    case Errc::golden_mismatch: return "GoldenMismatch";
    case Errc::no_representation: return "NoRepresentation";
  }
  return "Unknown";
}

}  // namespace mixer
