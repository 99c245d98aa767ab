// bargain: batch front-end for the exchange-network bargaining library.
//   spectrum  closed-form spectrum report for an elementary structure
//   simulate  edge-balanced dynamics trajectory + summary
//   scan      convergence-time scaling scan over a size ladder
//   verify    stability / balance check of an outcome file
// Exit codes: 0 ok or pass, 1 verification failure, 2 input error,
// 3 invariant violation.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bargain/json_io.hpp"
#include "bargain/rng.hpp"
#include "bargain/scan.hpp"

namespace {

using nlohmann::json;
using namespace bargain;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInvariant = 3;

struct SharedOpts {
  double alpha = 1.0;
  double epsilon = 1e-10;
  long horizon = 200000;
  std::uint64_t seed = 12345;
  std::string out;
  std::string format = "csv";
};

void add_shared(CLI::App* cmd, SharedOpts& opts) {
  cmd->add_option("--alpha", opts.alpha, "smoothing parameter in (0, 1]");
  cmd->add_option("--epsilon", opts.epsilon, "sup-norm convergence threshold");
  cmd->add_option("--horizon", opts.horizon, "maximum step count");
  cmd->add_option("--seed", opts.seed, "64-bit seed for random initialization");
  cmd->add_option("--out", opts.out, "output path (stdout when omitted)");
  cmd->add_option("--format", opts.format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty())
    std::cout << text;
  else
    write_text_file(out_path, text);
}

SpectrumReport spectrum_for(const ElementarySpec& spec) {
  switch (spec.kind) {
    case ElementarySpec::Kind::path: return path_spectrum(spec.n);
    case ElementarySpec::Kind::cycle: return cycle_spectrum(spec.n);
    case ElementarySpec::Kind::blossom: return blossom_spectrum(spec.n, spec.m);
    case ElementarySpec::Kind::bicycle: return bicycle_spectrum(spec.l, spec.n, spec.m);
  }
  throw Error(Errc::spec_invariant_violation, "unknown family");
}

int cmd_spectrum(const std::string& spec_text, const SharedOpts& opts) {
  const ElementarySpec spec = parse_elementary_spec(spec_text);
  spec.check();
  SpectrumReport report = spectrum_for(spec);
  if (opts.alpha != 1.0) report = alpha_shift(report, opts.alpha);
  emit(opts.out, spectrum_to_json(report).dump(2) + "\n");
  return kExitOk;
}

ProfitState initial_state(const std::string& x0_arg, const ElementaryInstance* inst,
                          const ExchangeNetwork& net, std::uint64_t seed,
                          std::vector<std::string>& warnings) {
  if (x0_arg == "zeros" || x0_arg == "ones" || x0_arg == "random") {
    if (inst) {
      std::vector<double> v(inst->reduced_dim(),
                            x0_arg == "ones" ? 1.0 : 0.0);
      if (x0_arg == "random") v = Rng(seed).uniform_vector(v.size());
      return from_reduced(*inst, v);
    }
    ProfitState x(net.node_count(), x0_arg == "ones" ? net.max_weight() : 0.0);
    if (x0_arg == "random") {
      Rng rng(seed);
      for (double& v : x) v = rng.uniform01() * net.max_weight();
    }
    for (const auto& [node, value] : net.pinned()) x[node] = value;
    return x;
  }
  // explicit file: JSON array of per-node values
  const json doc = load_json_file(x0_arg);
  if (!doc.is_array()) throw Error(Errc::parse_error, "x0 file must be a JSON array");
  ProfitState x = doc.get<ProfitState>();
  if (static_cast<int>(x.size()) != net.node_count())
    throw Error(Errc::parse_error, "x0 length does not match node count");
  if (inst) {
    const auto partner = inst->matching.partner_map(net.node_count());
    for (int rep : inst->reduced_index) {
      if (std::abs(x[rep] + x[partner[rep]] - 1.0) > 1e-9) {
        warnings.push_back("matched-pair sums differ from 1; reduced-form export suppressed");
        break;
      }
    }
  }
  return x;
}

int cmd_simulate(const std::string& input, const std::string& x0_arg,
                 const std::string& summary_out, const SharedOpts& opts) {
  std::optional<ElementaryInstance> inst;
  std::optional<NetworkBundle> bundle;
  // Elementary spec strings always start with a family name; anything else is
  // read as a network JSON file.
  try {
    const ElementarySpec spec = parse_elementary_spec(input);
    inst = build(spec);
  } catch (const Error& e) {
    if (e.code() != Errc::parse_error) throw;
    bundle = load_network(input);
  }
  const ExchangeNetwork& net = inst ? inst->network : bundle->network;
  const Matching& matching = inst ? inst->matching : bundle->matching;

  const auto violations = validate(net, matching);
  for (const auto& v : violations)
    if (!v.warning)
      throw Error(Errc::spec_invariant_violation, std::string(errc_name(v.code)) + " " + v.detail);

  std::vector<std::string> warnings;
  for (const auto& v : violations)
    if (v.warning) warnings.push_back(std::string(errc_name(v.code)) + " " + v.detail);

  ProfitState x0 = initial_state(x0_arg, inst ? &*inst : nullptr, net, opts.seed, warnings);
  const DynamicsConfig cfg{opts.alpha, opts.epsilon, opts.horizon};

  json summary;
  summary["input"] = input;
  summary["x0_source"] = x0_arg;
  summary["alpha"] = opts.alpha;
  summary["epsilon"] = opts.epsilon;
  summary["horizon"] = opts.horizon;
  summary["seed"] = opts.seed;

  const Trajectory traj = simulate(net, matching, x0, cfg);
  std::optional<ProfitState> x_star;
  if (inst && (inst->spec.kind == ElementarySpec::Kind::blossom ||
               inst->spec.kind == ElementarySpec::Kind::bicycle)) {
    try {
      const LinearizationReport lin = analyze_linearization(*inst, traj);
      summary["linearization"] = {{"T0", lin.t0}, {"horizon_used", lin.horizon_used}};
      summary["linearization"]["loops"] = json::array();
      for (const auto& loop : lin.loops)
        summary["linearization"]["loops"].push_back(
            {{"T0", loop.t0},
             {"settled_case", loop.settled_case == 1 ? "Case1" : "Case2"},
             {"end_sum", loop.final_end_sum}});
    } catch (const Error& e) {
      // Odd loops can keep alternating the gateway branch at every step;
      // report T0 as not found rather than failing the run.
      if (e.code() != Errc::horizon_too_short) throw;
      summary["linearization"] = {{"T0", nullptr}, {"note", e.what()}};
      warnings.push_back(e.what());
    }
    // the fixed point is shared by every branch case
    x_star = from_reduced(*inst, fixed_point(canonical_model(inst->spec, opts.alpha)));
  } else if (inst && inst->spec.kind == ElementarySpec::Kind::path) {
    x_star = from_reduced(*inst, fixed_point(canonical_model(inst->spec, opts.alpha)));
  } else if (inst && inst->spec.kind == ElementarySpec::Kind::cycle && traj.converged) {
    x_star = traj.last();
  }

  summary["converged"] = traj.converged;
  summary["steps"] = traj.steps_taken;
  summary["final_x"] = traj.last();
  bool reduced_ok = inst.has_value();
  if (inst) {
    try {
      summary["final_reduced"] = to_reduced(*inst, traj.last());
    } catch (const Error&) {
      reduced_ok = false;
      warnings.push_back("final state has pair sums off 1; reduced-form export suppressed");
    }
  }
  (void)reduced_ok;
  if (x_star) {
    try {
      const RateFit fit = estimate_rate(traj, *x_star);
      summary["rate"] = {{"R_empirical", fit.rate},
                         {"T_empirical", 1.0 / fit.rate},
                         {"fit_rms", fit.rms},
                         {"window", {fit.window_begin, fit.window_end}}};
    } catch (const Error& e) {
      summary["rate"] = nullptr;
      warnings.push_back(std::string("rate fit unavailable: ") + e.what());
    }
  } else {
    summary["rate"] = nullptr;
  }
  summary["warnings"] = warnings;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  std::ostringstream csv;
  write_trajectory_csv(traj, csv);
  emit(opts.out, csv.str());
  emit(summary_out, summary.dump(2) + "\n");
  return kExitOk;
}

int cmd_scan(const std::string& family, const std::vector<int>& sizes, int stem, int loop1,
             double xp, double xm, const std::string& summary_out, const SharedOpts& opts) {
  ElementarySpec base;
  if (family == "path") {
    base.kind = ElementarySpec::Kind::path;
    base.x_plus = xp;
    base.x_minus = xm;
  } else if (family == "cycle") {
    base.kind = ElementarySpec::Kind::cycle;
  } else if (family == "blossom") {
    base.kind = ElementarySpec::Kind::blossom;
    base.n = stem;
  } else if (family == "bicycle") {
    base.kind = ElementarySpec::Kind::bicycle;
    base.n = stem;
    base.l = loop1;
  } else {
    throw Error(Errc::parse_error, "unknown family '" + family + "'");
  }
  ScanPlan plan = make_scan_plan(base, sizes);
  plan.alpha = opts.alpha;
  plan.epsilon = opts.epsilon;
  plan.horizon = opts.horizon;
  plan.seed = opts.seed;
  const ScanResult result = run_scan(plan);
  if (opts.format == "json")
    emit(opts.out, scan_summary_json(result, plan));
  else
    emit(opts.out, scan_to_csv(result, plan));
  if (!summary_out.empty()) emit(summary_out, scan_summary_json(result, plan));
  return kExitOk;
}

int cmd_verify(const std::string& path, double tol, const SharedOpts& opts) {
  const NetworkBundle bundle = load_network(path);
  if (!bundle.x) throw Error(Errc::parse_error, "outcome file needs an 'x' field");
  const auto violations = validate(bundle.network, bundle.matching);
  for (const auto& v : violations)
    if (!v.warning)
      throw Error(Errc::spec_invariant_violation, std::string(errc_name(v.code)) + " " + v.detail);
  const OutcomeCheckReport report = check_outcome(bundle.network, bundle.matching, *bundle.x, tol);
  emit(opts.out, outcome_to_json(report).dump(2) + "\n");
  return report.stable && report.balanced ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-balanced bargaining dynamics on exchange networks"};
  app.require_subcommand(1);

  SharedOpts opts;
  std::string spec_text;
  std::string input;
  std::string x0_arg = "zeros";
  std::string summary_out;
  std::string family;
  std::vector<int> sizes;
  int stem = 1;
  int loop1 = 2;
  double xp = 0.0, xm = 0.0;
  double tol = 1e-9;

  auto* spectrum = app.add_subcommand("spectrum", "closed-form spectrum report (JSON)");
  spectrum->add_option("spec", spec_text, "elementary spec, e.g. blossom:n=3,m=4")->required();
  add_shared(spectrum, opts);

  auto* simulate = app.add_subcommand("simulate", "trajectory CSV + summary JSON");
  simulate->add_option("input", input, "elementary spec or network JSON file")->required();
  simulate->add_option("--x0", x0_arg, "zeros|ones|random|<json array file>");
  simulate->add_option("--summary-out", summary_out, "summary JSON path (stdout when omitted)");
  add_shared(simulate, opts);

  auto* scan = app.add_subcommand("scan", "convergence-time scaling scan");
  scan->add_option("family", family, "path|cycle|blossom|bicycle")->required();
  scan->add_option("--sizes", sizes, "increasing size ladder (n, or loop m)")
      ->required()
      ->delimiter(',');
  scan->add_option("--stem", stem, "stem/cross-bar matched edges (blossom, bicycle)");
  scan->add_option("--loop1", loop1, "first loop matched edges (bicycle)");
  scan->add_option("--xp", xp, "path boundary x+");
  scan->add_option("--xm", xm, "path boundary x-");
  scan->add_option("--summary-out", summary_out, "fit summary JSON path");
  add_shared(scan, opts);

  auto* verify = app.add_subcommand("verify", "stability/balance check of an outcome");
  verify->add_option("network", input, "network JSON with matching and x")->required();
  verify->add_option("--tol", tol, "absolute tolerance");
  add_shared(verify, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(spec_text, opts);
    if (simulate->parsed()) return cmd_simulate(input, x0_arg, summary_out, opts);
    if (scan->parsed()) return cmd_scan(family, sizes, stem, loop1, xp, xm, summary_out, opts);
    if (verify->parsed()) return cmd_verify(input, tol, opts);
  } catch (const bargain::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case bargain::Errc::parse_error:
      case bargain::Errc::io_error: return kExitInputError;
      default: return kExitInvariant;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
