#include "bargain/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bargain {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

NetworkBundle network_from_json(const json& doc) {
  try {
    if (!doc.is_object()) throw Error(Errc::parse_error, "network document must be an object");
    if (!doc.contains("nodes") || !doc["nodes"].is_number_integer())
      throw Error(Errc::parse_error, "missing integer field 'nodes'");
    const int nodes = doc["nodes"].get<int>();

    std::vector<Edge> edges;
    if (doc.contains("edges")) {
      for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 3)
          throw Error(Errc::parse_error, "edges must be [i, j, w] triples");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
      }
    }
    std::map<int, double> pinned;
    if (doc.contains("pinned")) {
      for (const auto& [key, value] : doc["pinned"].items())
        pinned[std::stoi(key)] = value.get<double>();
    }
    Matching matching;
    if (doc.contains("matching")) {
      for (const auto& p : doc["matching"]) {
        if (!p.is_array() || p.size() != 2)
          throw Error(Errc::parse_error, "matching entries must be [i, j] pairs");
        const int i = p[0].get<int>();
        const int j = p[1].get<int>();
        matching.pairs.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
    std::optional<ProfitState> x;
    if (doc.contains("x")) {
      x = doc["x"].get<ProfitState>();
      if (static_cast<int>(x->size()) != nodes)
        throw Error(Errc::parse_error, "'x' length does not match 'nodes'");
    }
    return {ExchangeNetwork(nodes, std::move(edges), std::move(pinned)), std::move(matching),
            std::move(x)};
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

NetworkBundle load_network(const std::string& path) {
  return network_from_json(load_json_file(path));
}

json network_to_json(const NetworkBundle& bundle) {
  json doc;
  doc["nodes"] = bundle.network.node_count();
  doc["edges"] = json::array();
  for (const Edge& e : bundle.network.edges()) doc["edges"].push_back({e.u, e.v, e.w});
  doc["matching"] = json::array();
  for (const auto& [u, v] : bundle.matching.pairs) doc["matching"].push_back({u, v});
  doc["pinned"] = json::object();
  for (const auto& [node, value] : bundle.network.pinned())
    doc["pinned"][std::to_string(node)] = value;
  if (bundle.x) doc["x"] = *bundle.x;
  return doc;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t n = traj.states.empty() ? 0 : traj.states.front().size();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",x_" << i;
  out << '\n';
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << t;
    for (double v : traj.states[t]) out << ',' << format_double(v);
    out << '\n';
  }
}

json model_to_json(const LinearModel& model) {
  json doc;
  doc["family"] = kind_name(model.spec.kind);
  doc["alpha"] = model.alpha;
  doc["dim"] = model.dim;
  if (model.case_loop1 != 0) doc["case_loop1"] = model.case_loop1;
  if (model.case_loop2 != 0) doc["case_loop2"] = model.case_loop2;
  doc["A"] = model.a.data();  // row-major
  doc["b"] = model.b;
  return doc;
}

namespace {

json spec_sizes(const ElementarySpec& spec) {
  json sizes;
  switch (spec.kind) {
    case ElementarySpec::Kind::path:
      sizes["n"] = spec.n;
      sizes["x_plus"] = spec.x_plus;
      sizes["x_minus"] = spec.x_minus;
      break;
    case ElementarySpec::Kind::cycle: sizes["n"] = spec.n; break;
    case ElementarySpec::Kind::blossom:
      sizes["n"] = spec.n;
      sizes["m"] = spec.m;
      break;
    case ElementarySpec::Kind::bicycle:
      sizes["l"] = spec.l;
      sizes["n"] = spec.n;
      sizes["m"] = spec.m;
      break;
  }
  return sizes;
}

}  // namespace

json spectrum_to_json(const SpectrumReport& report) {
  json doc;
  doc["family"] = kind_name(report.spec.kind);
  doc["sizes"] = spec_sizes(report.spec);
  doc["alpha"] = report.alpha;
  doc["eigenvalues"] = json::array();
  for (const auto& e : report.eigenvalues)
    doc["eigenvalues"].push_back(
        {{"value", e.value}, {"family_tag", family_tag_name(e.tag)}, {"k", e.k}});
  doc["rho"] = report.rho;
  doc["lambda2"] = report.lambda2;
  // NaN / inf serialize as null: JSON has no literals for them.
  doc["R"] = report.rate;
  doc["T"] = report.time;
  doc["classification"] = classification_name(report.classification);
  return doc;
}

json outcome_to_json(const OutcomeCheckReport& report) {
  json doc;
  doc["stable"] = report.stable;
  doc["balanced"] = report.balanced;
  doc["worst_stability_violation"] = report.worst_stability_violation;
  doc["worst_balance_residual"] = report.worst_balance_residual;
  doc["tolerance"] = report.tolerance;
  doc["edges"] = json::array();
  for (const auto& e : report.edges) {
    json row{{"u", e.u},         {"v", e.v},           {"w", e.weight},
             {"slack", e.slack}, {"matched", e.matched}};
    if (e.matched) {
      row["outside_u"] = e.outside_u;
      row["outside_v"] = e.outside_v;
      row["balance_residual"] = e.balance_residual;
    }
    doc["edges"].push_back(row);
  }
  return doc;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, std::string(e.what()) + " in " + path);
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_error, "cannot open " + path + " for writing");
  out << text;
  if (!out) throw Error(Errc::io_error, "failed writing " + path);
}

}  // namespace bargain
