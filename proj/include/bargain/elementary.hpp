// Constructors for the four elementary alternating structures (path, cycle,
// blossom, bicycle) with unit weights, canonical node labeling, and the maps
// between full node states and reduced per-matched-edge states.
//
// Conventions, fixed once here and relied on everywhere else:
//  - Path: matched edges 1..n from the x+ anchor toward the x- anchor; the
//    representative of edge i is its node nearer the x+ end. Both anchors are
//    pinned nodes attached by unmatched edges.
//  - Cycle: matched edges enumerated clockwise; representative is the first
//    node of each matched edge clockwise.
//  - Blossom: a stem of n matched edges whose open end is free (no anchor);
//    stem edge n is matched into the loop's gateway node, so the gateway is
//    the partner of the stem representative x_n. The loop has 2m+1 nodes
//    counting the gateway, whose two loop edges are unmatched.
//  - Bicycle: two blossom loops joined by a cross-bar of n matched edges.
//    Loop 1's gateway carries the bar variable x_1 itself; loop 2's gateway
//    is the partner of x_n, exactly as in the blossom.
#pragma once

#include <string>
#include <vector>

#include "bargain/graph.hpp"

namespace bargain {

struct ElementarySpec {
  enum class Kind { path, cycle, blossom, bicycle };

  Kind kind = Kind::path;
  int n = 0;  // path/cycle: matched edges; blossom: stem; bicycle: cross-bar
  int m = 0;  // blossom loop; bicycle loop 2
  int l = 0;  // bicycle loop 1
  double x_plus = 0.0;
  double x_minus = 0.0;

  // Number of matched edges == dimension of the reduced state.
  int reduced_dim() const;
  // Throws Error(spec_invariant_violation) when sizes or boundaries are bad.
  void check() const;
};

const char* kind_name(ElementarySpec::Kind kind);

// Compact CLI form: "path:n=8,xp=0,xm=0", "cycle:n=6", "blossom:n=3,m=4",
// "bicycle:l=3,n=2,m=5". Throws Error(parse_error) on malformed input.
ElementarySpec parse_elementary_spec(const std::string& text);
std::string spec_to_string(const ElementarySpec& spec);

struct ElementaryInstance {
  ElementarySpec spec;
  ExchangeNetwork network;
  Matching matching;
  // matched-edge ordinal -> representative node, in reduced state order
  // (path/cycle: x_1..x_n; blossom: x_1..x_n, y_1..y_m;
  //  bicycle: z_1..z_l, x_1..x_n, y_1..y_m).
  std::vector<int> reduced_index;
  std::vector<std::string> labels;  // per-node role tags, metadata only

  int reduced_dim() const { return static_cast<int>(reduced_index.size()); }
  int representative(int ordinal) const { return reduced_index[ordinal]; }
  int partner_of(int ordinal) const;
};

ElementaryInstance build(const ElementarySpec& spec);

// Reduced state (v_k = value of each representative node). Requires every
// matched pair to sum to 1 within 1e-9; throws Error(pair_sum_violation).
std::vector<double> to_reduced(const ElementaryInstance& inst, const ProfitState& x_full);

// Full state with representative v_k, partner 1 - v_k, anchors pinned.
// Entries of v must lie in [0, 1].
ProfitState from_reduced(const ElementaryInstance& inst, const std::vector<double>& v);

// Representative values read directly (no pair-sum requirement); used when a
// trajectory only needs to be observed, not round-tripped.
std::vector<double> reduced_view(const ElementaryInstance& inst, const ProfitState& x_full);

}  // namespace bargain
