#include "geoflow/error.hpp"

namespace geoflow {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::numeric_degeneracy: return "numeric-degeneracy";
    case ErrorKind::classification_ambiguous: return "classification-ambiguous";
    case ErrorKind::bad_surface: return "bad-surface";
    case ErrorKind::partial_result: return "partial-result";
    case ErrorKind::canonicalization_failure: return "canonicalization-failure";
    case ErrorKind::spectrum_inconsistency: return "spectrum-inconsistency";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::degenerate_measure: return "degenerate-measure";
    case ErrorKind::invalid_configuration: return "invalid-configuration";
    case ErrorKind::reduction_failure: return "reduction-failure";
    case ErrorKind::integration_error: return "integration-error";
    case ErrorKind::step_size: return "step-size";
    case ErrorKind::io: return "io";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

}  // namespace geoflow
