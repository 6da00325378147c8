#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proxlaw {

enum class Errc {
  schema_error,
  duplicate_node,
  unknown_endpoint,
  bad_weight,
  duplicate_edge,
  self_loop,
  bad_parameter,
  unknown_layer,
  unknown_node,
  weights_unavailable,
  degenerate_vector,
  length_mismatch,
  missing_attribute,
  too_large_for_exhaustive,
  config_mismatch,
  duplicate_experiment,
  ledger_io,
  malformed_digest,
  malformed_log,
  bad_layer_kind,
};

std::string_view errc_name(Errc code);

// Domain failure. `element` names the offending node/layer/edge/field when
// there is one; empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string element, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code),
        element_(std::move(element)) {}

  Errc code() const noexcept { return code_; }
  const std::string& element() const noexcept { return element_; }

 private:
  Errc code_;
  std::string element_;
};

// Filesystem-level failure (missing file, unwritable path). Kept distinct
// from Error so callers can map domain vs IO failures to different exit codes.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace proxlaw
