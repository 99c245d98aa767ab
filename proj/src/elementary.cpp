#include "bargain/elementary.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace bargain {

int ElementarySpec::reduced_dim() const {
  switch (kind) {
    case Kind::path:
    case Kind::cycle: return n;
    case Kind::blossom: return n + m;
    case Kind::bicycle: return l + n + m;
  }
  return 0;
}

void ElementarySpec::check() const {
  switch (kind) {
    case Kind::path:
      if (n < 1) throw Error(Errc::spec_invariant_violation, "path requires n >= 1");
      if (!(x_plus >= 0.0 && x_plus <= 1.0 && x_minus >= 0.0 && x_minus <= 1.0))
        throw Error(Errc::spec_invariant_violation, "path boundaries must lie in [0, 1]");
      break;
    case Kind::cycle:
      if (n < 2) throw Error(Errc::spec_invariant_violation, "cycle requires n >= 2");
      break;
    case Kind::blossom:
      if (n < 1) throw Error(Errc::spec_invariant_violation, "blossom requires n >= 1");
      if (m < 2) throw Error(Errc::spec_invariant_violation, "blossom requires m >= 2");
      break;
    case Kind::bicycle:
      if (l < 2 || m < 2)
        throw Error(Errc::spec_invariant_violation, "bicycle requires l, m >= 2");
      if (n < 1) throw Error(Errc::spec_invariant_violation, "bicycle requires n >= 1");
      break;
  }
}

const char* kind_name(ElementarySpec::Kind kind) {
  switch (kind) {
    case ElementarySpec::Kind::path: return "path";
    case ElementarySpec::Kind::cycle: return "cycle";
    case ElementarySpec::Kind::blossom: return "blossom";
    case ElementarySpec::Kind::bicycle: return "bicycle";
  }
  return "?";
}

ElementarySpec parse_elementary_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw Error(Errc::parse_error, "expected '<family>:<k=v,...>' in '" + text + "'");
  const std::string family = text.substr(0, colon);
  ElementarySpec spec;
  if (family == "path")
    spec.kind = ElementarySpec::Kind::path;
  else if (family == "cycle")
    spec.kind = ElementarySpec::Kind::cycle;
  else if (family == "blossom")
    spec.kind = ElementarySpec::Kind::blossom;
  else if (family == "bicycle")
    spec.kind = ElementarySpec::Kind::bicycle;
  else
    throw Error(Errc::parse_error, "unknown family '" + family + "'");

  std::stringstream rest(text.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::parse_error, "expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    std::size_t used = 0;
    double parsed = 0.0;
    try {
      parsed = std::stod(value, &used);
    } catch (const std::exception&) {
      throw Error(Errc::parse_error, "bad number '" + value + "'");
    }
    if (used != value.size()) throw Error(Errc::parse_error, "bad number '" + value + "'");
    if (key == "n")
      spec.n = static_cast<int>(parsed);
    else if (key == "m")
      spec.m = static_cast<int>(parsed);
    else if (key == "l")
      spec.l = static_cast<int>(parsed);
    else if (key == "xp")
      spec.x_plus = parsed;
    else if (key == "xm")
      spec.x_minus = parsed;
    else
      throw Error(Errc::parse_error, "unknown key '" + key + "'");
  }
  return spec;
}

std::string spec_to_string(const ElementarySpec& spec) {
  std::ostringstream out;
  out << kind_name(spec.kind) << ':';
  switch (spec.kind) {
    case ElementarySpec::Kind::path:
      out << "n=" << spec.n << ",xp=" << spec.x_plus << ",xm=" << spec.x_minus;
      break;
    case ElementarySpec::Kind::cycle: out << "n=" << spec.n; break;
    case ElementarySpec::Kind::blossom: out << "n=" << spec.n << ",m=" << spec.m; break;
    case ElementarySpec::Kind::bicycle:
      out << "l=" << spec.l << ",n=" << spec.n << ",m=" << spec.m;
      break;
  }
  return out.str();
}

int ElementaryInstance::partner_of(int ordinal) const {
  const auto partner = matching.partner_map(network.node_count());
  return partner[reduced_index[ordinal]];
}

namespace {

struct Builder {
  std::vector<Edge> edges;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> reduced;
  std::vector<std::string> labels;

  void unmatched(int u, int v) { edges.push_back({u, v, 1.0}); }
  void matched(int rep, int partner) {
    edges.push_back({rep, partner, 1.0});
    pairs.emplace_back(std::min(rep, partner), std::max(rep, partner));
    reduced.push_back(rep);
  }
};

ElementaryInstance finish(const ElementarySpec& spec, Builder&& b, int node_count,
                          std::map<int, double> pinned) {
  ExchangeNetwork net(node_count, std::move(b.edges), std::move(pinned));
  ElementaryInstance inst{spec, std::move(net), Matching{std::move(b.pairs)},
                          std::move(b.reduced), std::move(b.labels)};
  return inst;
}

ElementaryInstance build_path_instance(const ElementarySpec& spec) {
  const int n = spec.n;
  Builder b;
  b.labels.resize(2 * n + 2);
  const int anchor_plus = 2 * n;
  const int anchor_minus = 2 * n + 1;
  b.unmatched(anchor_plus, 0);
  for (int k = 0; k < n; ++k) {
    b.matched(2 * k, 2 * k + 1);
    b.labels[2 * k] = "path-" + std::to_string(k + 1);
    b.labels[2 * k + 1] = "path-" + std::to_string(k + 1) + "'";
    if (k + 1 < n) b.unmatched(2 * k + 1, 2 * k + 2);
  }
  b.unmatched(2 * n - 1, anchor_minus);
  b.labels[anchor_plus] = "anchor-plus";
  b.labels[anchor_minus] = "anchor-minus";
  return finish(spec, std::move(b), 2 * n + 2,
                {{anchor_plus, spec.x_plus}, {anchor_minus, spec.x_minus}});
}

ElementaryInstance build_cycle_instance(const ElementarySpec& spec) {
  const int n = spec.n;
  Builder b;
  b.labels.resize(2 * n);
  for (int k = 0; k < n; ++k) {
    b.matched(2 * k, 2 * k + 1);
    b.labels[2 * k] = "loop-" + std::to_string(k + 1);
    b.labels[2 * k + 1] = "loop-" + std::to_string(k + 1) + "'";
    b.unmatched(2 * k + 1, (2 * k + 2) % (2 * n));
  }
  return finish(spec, std::move(b), 2 * n, {});
}

ElementaryInstance build_blossom_instance(const ElementarySpec& spec) {
  const int n = spec.n;
  const int m = spec.m;
  Builder b;
  b.labels.resize(2 * (n + m));
  const int gateway = 2 * n - 1;  // partner of the stem representative x_n
  for (int k = 0; k < n; ++k) {
    b.matched(2 * k, 2 * k + 1);
    b.labels[2 * k] = "stem-" + std::to_string(k + 1);
    b.labels[2 * k + 1] = "stem-" + std::to_string(k + 1) + "'";
    if (k + 1 < n) b.unmatched(2 * k + 1, 2 * k + 2);
  }
  b.labels[gateway] = "gateway";
  const auto loop_first = [&](int j) { return 2 * n + 2 * j; };  // y_{j+1}
  b.unmatched(gateway, loop_first(0));
  for (int j = 0; j < m; ++j) {
    b.matched(loop_first(j), loop_first(j) + 1);
    b.labels[loop_first(j)] = "loop-" + std::to_string(j + 1);
    b.labels[loop_first(j) + 1] = "loop-" + std::to_string(j + 1) + "'";
    if (j + 1 < m) b.unmatched(loop_first(j) + 1, loop_first(j + 1));
  }
  b.unmatched(loop_first(m - 1) + 1, gateway);
  return finish(spec, std::move(b), 2 * (n + m), {});
}

ElementaryInstance build_bicycle_instance(const ElementarySpec& spec) {
  const int l = spec.l;
  const int n = spec.n;
  const int m = spec.m;
  Builder b;
  b.labels.resize(2 * (l + n + m));
  const int gateway1 = 2 * l;          // carries the bar variable x_1
  const int gateway2 = 2 * l + 2 * n - 1;  // partner of the bar representative x_n

  // loop 1 (z), clockwise from gateway1
  const auto z_first = [&](int j) { return 2 * j; };
  for (int j = 0; j < l; ++j) {
    b.matched(z_first(j), z_first(j) + 1);
    b.labels[z_first(j)] = "loop1-" + std::to_string(j + 1);
    b.labels[z_first(j) + 1] = "loop1-" + std::to_string(j + 1) + "'";
    if (j + 1 < l) b.unmatched(z_first(j) + 1, z_first(j + 1));
  }
  b.unmatched(gateway1, z_first(0));
  b.unmatched(z_first(l - 1) + 1, gateway1);

  // cross-bar (x): representatives 2l, 2l+2, ...; partners interleaved
  for (int k = 0; k < n; ++k) {
    b.matched(2 * l + 2 * k, 2 * l + 2 * k + 1);
    b.labels[2 * l + 2 * k] = "bar-" + std::to_string(k + 1);
    b.labels[2 * l + 2 * k + 1] = "bar-" + std::to_string(k + 1) + "'";
    if (k + 1 < n) b.unmatched(2 * l + 2 * k + 1, 2 * l + 2 * k + 2);
  }
  b.labels[gateway1] = "gateway-1";
  b.labels[gateway2] = "gateway-2";

  // loop 2 (y), clockwise from gateway2
  const auto y_first = [&](int j) { return 2 * l + 2 * n + 2 * j; };
  b.unmatched(gateway2, y_first(0));
  for (int j = 0; j < m; ++j) {
    b.matched(y_first(j), y_first(j) + 1);
    b.labels[y_first(j)] = "loop2-" + std::to_string(j + 1);
    b.labels[y_first(j) + 1] = "loop2-" + std::to_string(j + 1) + "'";
    if (j + 1 < m) b.unmatched(y_first(j) + 1, y_first(j + 1));
  }
  b.unmatched(y_first(m - 1) + 1, gateway2);

  // reduced order is (z, x, y); the builder appended (z, x, y) already
  return finish(spec, std::move(b), 2 * (l + n + m), {});
}

}  // namespace

ElementaryInstance build(const ElementarySpec& spec) {
  spec.check();
  switch (spec.kind) {
    case ElementarySpec::Kind::path: return build_path_instance(spec);
    case ElementarySpec::Kind::cycle: return build_cycle_instance(spec);
    case ElementarySpec::Kind::blossom: return build_blossom_instance(spec);
    case ElementarySpec::Kind::bicycle: return build_bicycle_instance(spec);
  }
  throw Error(Errc::spec_invariant_violation, "unknown kind");
}

std::vector<double> to_reduced(const ElementaryInstance& inst, const ProfitState& x_full) {
  const auto partner = inst.matching.partner_map(inst.network.node_count());
  std::vector<double> v(inst.reduced_index.size());
  for (std::size_t k = 0; k < inst.reduced_index.size(); ++k) {
    const int rep = inst.reduced_index[k];
    const double sum = x_full[rep] + x_full[partner[rep]];
    if (std::abs(sum - 1.0) > 1e-9)
      throw Error(Errc::pair_sum_violation, "matched edge " + std::to_string(k) +
                                                " sums to " + std::to_string(sum));
    v[k] = x_full[rep];
  }
  return v;
}

ProfitState from_reduced(const ElementaryInstance& inst, const std::vector<double>& v) {
  if (v.size() != inst.reduced_index.size())
    throw Error(Errc::dimension_mismatch, "reduced vector has wrong length");
  const auto partner = inst.matching.partner_map(inst.network.node_count());
  ProfitState x(inst.network.node_count(), 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] >= 0.0 && v[k] <= 1.0))
      throw Error(Errc::spec_invariant_violation, "reduced values must lie in [0, 1]");
    const int rep = inst.reduced_index[k];
    x[rep] = v[k];
    x[partner[rep]] = 1.0 - v[k];
  }
  for (const auto& [node, value] : inst.network.pinned()) x[node] = value;
  return x;
}

std::vector<double> reduced_view(const ElementaryInstance& inst, const ProfitState& x_full) {
  std::vector<double> v(inst.reduced_index.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = x_full[inst.reduced_index[k]];
  return v;
}

}  // namespace bargain
