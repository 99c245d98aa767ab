#include "bargain/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bargain {

ExchangeNetwork::ExchangeNetwork(int node_count, std::vector<Edge> edges,
                                 std::map<int, double> pinned)
    : node_count_(node_count), edges_(std::move(edges)), pinned_(std::move(pinned)) {
  if (node_count_ <= 0) throw Error(Errc::spec_invariant_violation, "node_count must be positive");
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= node_count_ || e.v < 0 || e.v >= node_count_)
      throw Error(Errc::spec_invariant_violation,
                  "edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    if (!std::isfinite(e.w))
      throw Error(Errc::spec_invariant_violation, "edge weight must be finite");
  }
  for (const auto& [node, value] : pinned_) {
    if (node < 0 || node >= node_count_)
      throw Error(Errc::spec_invariant_violation, "pinned node " + std::to_string(node) +
                                                      " out of range");
    if (!std::isfinite(value))
      throw Error(Errc::spec_invariant_violation, "pinned value must be finite");
  }

  std::vector<int> degree(node_count_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    if (e.v != e.u) ++degree[e.v];
  }
  adj_offsets_.assign(node_count_ + 1, 0);
  for (int i = 0; i < node_count_; ++i) adj_offsets_[i + 1] = adj_offsets_[i] + degree[i];
  adj_.resize(adj_offsets_.back());
  std::vector<int> cursor(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (int idx = 0; idx < static_cast<int>(edges_.size()); ++idx) {
    const Edge& e = edges_[idx];
    adj_[cursor[e.u]++] = {e.v, e.w, idx};
    if (e.v != e.u) adj_[cursor[e.v]++] = {e.u, e.w, idx};
  }
  for (const Edge& e : edges_) max_weight_ = std::max(max_weight_, e.w);
}

std::span<const ExchangeNetwork::Neighbor> ExchangeNetwork::neighbors(int node) const {
  return {adj_.data() + adj_offsets_[node],
          static_cast<std::size_t>(adj_offsets_[node + 1] - adj_offsets_[node])};
}

bool ExchangeNetwork::has_edge(int i, int j) const {
  for (const Neighbor& nb : neighbors(i))
    if (nb.node == j) return true;
  return false;
}

double ExchangeNetwork::weight(int i, int j) const {
  if (i < 0 || i >= node_count_ || j < 0 || j >= node_count_)
    throw Error(Errc::edge_not_found, "node out of range");
  for (const Neighbor& nb : neighbors(i))
    if (nb.node == j) return nb.weight;
  throw Error(Errc::edge_not_found,
              "(" + std::to_string(i) + "," + std::to_string(j) + ") is not an edge");
}

std::vector<int> Matching::partner_map(int node_count) const {
  std::vector<int> partner(node_count, -1);
  for (const auto& [u, v] : pairs) {
    partner[u] = v;
    partner[v] = u;
  }
  return partner;
}

std::vector<Violation> validate(const ExchangeNetwork& net, const Matching& m) {
  std::vector<Violation> out;
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : net.edges()) {
    if (e.w < 0.0)
      out.push_back({Errc::negative_weight, "edge (" + std::to_string(e.u) + "," +
                                                std::to_string(e.v) + ") has weight " +
                                                std::to_string(e.w)});
    if (e.u == e.v)
      out.push_back({Errc::self_loop, "node " + std::to_string(e.u)});
    auto key = std::minmax(e.u, e.v);
    if (!seen.insert(key).second)
      out.push_back({Errc::duplicate_edge,
                     "(" + std::to_string(key.first) + "," + std::to_string(key.second) + ")"});
  }
  for (const auto& [node, value] : net.pinned()) {
    if (value < 0.0)
      out.push_back({Errc::negative_pinned_value,
                     "node " + std::to_string(node) + " pinned to " + std::to_string(value)});
  }

  std::vector<int> uses(net.node_count(), 0);
  for (const auto& [u, v] : m.pairs) {
    if (u < 0 || u >= net.node_count() || v < 0 || v >= net.node_count()) {
      out.push_back({Errc::match_not_an_edge,
                     "(" + std::to_string(u) + "," + std::to_string(v) + ") out of range"});
      continue;
    }
    if (!net.has_edge(u, v))
      out.push_back({Errc::match_not_an_edge,
                     "(" + std::to_string(u) + "," + std::to_string(v) + ")"});
    else if (net.weight(u, v) == 0.0)
      out.push_back({Errc::zero_weight_matched_edge,
                     "(" + std::to_string(u) + "," + std::to_string(v) + ")", true});
    ++uses[u];
    ++uses[v];
    for (int node : {u, v})
      if (net.is_pinned(node))
        out.push_back({Errc::pinned_node_matched, "node " + std::to_string(node)});
  }
  for (int i = 0; i < net.node_count(); ++i)
    if (uses[i] > 1)
      out.push_back({Errc::overlapping_match, "node " + std::to_string(i) + " appears " +
                                                  std::to_string(uses[i]) + " times"});
  return out;
}

namespace {

// Outside option over V_i \ {exclude}: every such edge is unmatched when i is
// matched to `exclude`, so this doubles as the y_l of the dynamics.
double outside_option(const ExchangeNetwork& net, const ProfitState& x, int node, int exclude) {
  double best = 0.0;
  for (const auto& nb : net.neighbors(node)) {
    if (nb.node == exclude) continue;
    best = std::max(best, nb.weight - x[nb.node]);
  }
  return std::max(best, 0.0);
}

}  // namespace

double best_alternate(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                      int node) {
  const auto partner = m.partner_map(net.node_count());
  if (partner[node] < 0)
    throw Error(Errc::unmatched_node, "node " + std::to_string(node) + " is not matched");
  double best = 0.0;
  for (const auto& nb : net.neighbors(node)) {
    if (nb.node == partner[node]) continue;
    best = std::max(best, nb.weight - x[nb.node]);
  }
  return std::max(best, 0.0);
}

double edge_slack(const ExchangeNetwork& net, const ProfitState& x, int i, int j) {
  const double w = net.weight(i, j);
  return x[i] + x[j] - w;
}

double node_slack(const ExchangeNetwork& net, const Matching& m, const ProfitState& x, int i) {
  const auto partner = m.partner_map(net.node_count());
  double s = x[i];
  for (const auto& nb : net.neighbors(i)) {
    if (nb.node == partner[i]) continue;
    s = std::min(s, x[i] + x[nb.node] - nb.weight);
  }
  return s;
}

OutcomeCheckReport check_outcome(const ExchangeNetwork& net, const Matching& m,
                                 const ProfitState& x, double tol) {
  if (tol <= 0.0) throw Error(Errc::spec_invariant_violation, "tolerance must be positive");
  const auto partner = m.partner_map(net.node_count());
  OutcomeCheckReport report;
  report.tolerance = tol;
  report.edges.reserve(net.edges().size());
  for (const Edge& e : net.edges()) {
    EdgeCheck check;
    check.u = e.u;
    check.v = e.v;
    check.weight = e.w;
    check.slack = x[e.u] + x[e.v] - e.w;
    check.matched = partner[e.u] == e.v;
    report.worst_stability_violation =
        std::max(report.worst_stability_violation, std::max(0.0, -check.slack));
    if (check.matched) {
      check.outside_u = outside_option(net, x, e.u, e.v);
      check.outside_v = outside_option(net, x, e.v, e.u);
      check.balance_residual =
          std::abs((x[e.u] - check.outside_u) - (x[e.v] - check.outside_v));
      report.worst_balance_residual =
          std::max(report.worst_balance_residual, check.balance_residual);
    }
    report.edges.push_back(check);
  }
  report.stable = report.worst_stability_violation <= tol;
  report.balanced = report.worst_balance_residual <= tol;
  return report;
}

}  // namespace bargain
