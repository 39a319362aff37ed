#pragma once

#include <stdexcept>
#include <string>

namespace geoflow {

enum class ErrorKind {
  invalid_argument,
  numeric_degeneracy,
  classification_ambiguous,
  bad_surface,
  partial_result,
  canonicalization_failure,
  spectrum_inconsistency,
  out_of_range,
  degenerate_measure,
  invalid_configuration,
  reduction_failure,
  integration_error,
  step_size,
  io,
  config,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown by ball enumeration when the element budget runs out. Every element
// with displacement strictly below completed_radius() was found.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, double completed_radius)
      : Error(ErrorKind::partial_result, what),
        completed_radius_(completed_radius) {}

  double completed_radius() const noexcept { return completed_radius_; }

 private:
  double completed_radius_;
};

}  // namespace geoflow
