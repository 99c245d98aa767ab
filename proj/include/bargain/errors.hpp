// Error codes and the exception type shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace bargain {

enum class Errc {
  // graph / matching validation
  negative_weight,
  self_loop,
  duplicate_edge,
  negative_pinned_value,
  overlapping_match,
  match_not_an_edge,
  pinned_node_matched,
  zero_weight_matched_edge,  // warning-only: state is pinned to 0/0 by clamping
  // operations
  unmatched_node,
  edge_not_found,
  pair_sum_violation,
  dimension_mismatch,
  singular_system,
  not_symmetric,
  insufficient_decay,
  at_fixed_point,
  horizon_too_short,
  periodic_no_convergence,
  spec_invariant_violation,
  parse_error,
  io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace bargain
