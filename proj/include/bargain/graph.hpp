// Exchange-network data model: weighted undirected graphs with optional
// pinned (constant-value) nodes, matchings, per-node profit states, and the
// stability / balance / slack predicates. All types are immutable values
// after construction and every operation is a pure function.
#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bargain/errors.hpp"

namespace bargain {

struct Edge {
  int u = 0;
  int v = 0;
  double w = 0.0;
};

// Profit vector x, one value per node; pinned nodes carry their pinned value.
using ProfitState = std::vector<double>;

class ExchangeNetwork {
 public:
  ExchangeNetwork(int node_count, std::vector<Edge> edges, std::map<int, double> pinned = {});

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::map<int, double>& pinned() const { return pinned_; }

  bool is_pinned(int node) const { return pinned_.count(node) > 0; }
  double pinned_value(int node) const { return pinned_.at(node); }

  struct Neighbor {
    int node;
    double weight;
    int edge_index;
  };
  std::span<const Neighbor> neighbors(int node) const;

  bool has_edge(int i, int j) const;
  // Weight of edge (i, j); throws Error(edge_not_found).
  double weight(int i, int j) const;

  double max_weight() const { return max_weight_; }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::map<int, double> pinned_;
  std::vector<int> adj_offsets_;
  std::vector<Neighbor> adj_;
  double max_weight_ = 0.0;
};

// Node-disjoint set of edges; pairs are stored with u < v.
struct Matching {
  std::vector<std::pair<int, int>> pairs;

  // partner[i] = matched partner of node i, or -1.
  // Later pairs win on conflicts; validate() reports such overlaps.
  std::vector<int> partner_map(int node_count) const;
};

struct Violation {
  Errc code;
  std::string detail;
  bool warning = false;
};

// Checks every type invariant of (net, m) and returns the complete list of
// violations; an empty error set means the pair is valid. w = 0 matched
// edges are legal but flagged as warnings.
std::vector<Violation> validate(const ExchangeNetwork& net, const Matching& m);

inline bool is_valid(const std::vector<Violation>& v) {
  for (const auto& x : v)
    if (!x.warning) return false;
  return true;
}

// Best alternate value y_l: max over unmatched incident edges (l,k) of
// (w_{l,k} - x_k)+, and 0 if there is none. Throws Error(unmatched_node)
// when `node` is not matched.
double best_alternate(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                      int node);

// s_{i,j} = x_i + x_j - w_{i,j}. Throws Error(edge_not_found).
double edge_slack(const ExchangeNetwork& net, const ProfitState& x, int i, int j);

// s_i = min(x_i, min over unmatched incident edges of s_{i,l}); equals x_i
// when node i has no unmatched incident edge.
double node_slack(const ExchangeNetwork& net, const Matching& m, const ProfitState& x, int i);

struct EdgeCheck {
  int u = 0;
  int v = 0;
  double weight = 0.0;
  double slack = 0.0;
  bool matched = false;
  // Matched edges only: outside options and the balance residual
  // |(x_u - o_u) - (x_v - o_v)|.
  double outside_u = 0.0;
  double outside_v = 0.0;
  double balance_residual = 0.0;
};

struct OutcomeCheckReport {
  bool stable = false;
  bool balanced = false;
  double worst_stability_violation = 0.0;  // max over edges of (w - x_i - x_j)+
  double worst_balance_residual = 0.0;     // max over matched edges
  double tolerance = 0.0;
  std::vector<EdgeCheck> edges;
};

// Evaluates stability on every edge and the Nash balance identity on every
// matched edge. Pinned nodes contribute as alternate-option sources but are
// never themselves checked for balance (they cannot be matched). Comparisons
// are absolute: values live in [0, w_max].
OutcomeCheckReport check_outcome(const ExchangeNetwork& net, const Matching& m,
                                 const ProfitState& x, double tol = 1e-9);

}  // namespace bargain
