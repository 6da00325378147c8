#include "proxlaw/errors.hpp"

namespace proxlaw {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::schema_error: return "SchemaError";
    case Errc::duplicate_node: return "DuplicateNode";
    case Errc::unknown_endpoint: return "UnknownEndpoint";
    case Errc::bad_weight: return "BadWeight";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::self_loop: return "SelfLoop";
    case Errc::bad_parameter: return "BadParameter";
    case Errc::unknown_layer: return "UnknownLayer";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::weights_unavailable: return "WeightsUnavailable";
    case Errc::degenerate_vector: return "DegenerateVector";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::missing_attribute: return "MissingAttribute";
    case Errc::too_large_for_exhaustive: return "TooLargeForExhaustive";
    case Errc::config_mismatch: return "ConfigMismatch";
    case Errc::duplicate_experiment: return "DuplicateExperiment";
    case Errc::ledger_io: return "LedgerIOError";
    case Errc::malformed_digest: return "MalformedDigest";
    case Errc::malformed_log: return "MalformedLog";
    case Errc::bad_layer_kind: return "BadLayerKind";
  }
  return "UnknownError";
}

}  // namespace proxlaw
