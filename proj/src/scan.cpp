#include "bargain/scan.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bargain/json_io.hpp"
#include "bargain/linear_model.hpp"
#include "bargain/rng.hpp"
#include "bargain/spectral.hpp"

namespace bargain {

void ScanPlan::check() const {
  if (rows.empty()) throw Error(Errc::spec_invariant_violation, "scan plan has no rows");
  if (rows.size() != sizes.size())
    throw Error(Errc::spec_invariant_violation, "rows and sizes out of step");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] <= 0) throw Error(Errc::spec_invariant_violation, "sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw Error(Errc::spec_invariant_violation, "sizes must be increasing");
    rows[i].check();
  }
  DynamicsConfig{alpha, epsilon, horizon}.check();
}

ScanPlan make_scan_plan(const ElementarySpec& base, const std::vector<int>& sizes) {
  ScanPlan plan;
  plan.sizes = sizes;
  for (int size : sizes) {
    ElementarySpec spec = base;
    if (base.kind == ElementarySpec::Kind::path || base.kind == ElementarySpec::Kind::cycle)
      spec.n = size;
    else
      spec.m = size;
    plan.rows.push_back(spec);
  }
  return plan;
}

namespace {

SpectrumReport spectrum_for(const ElementarySpec& spec) {
  switch (spec.kind) {
    case ElementarySpec::Kind::path: return path_spectrum(spec.n);
    case ElementarySpec::Kind::cycle: return cycle_spectrum(spec.n);
    case ElementarySpec::Kind::blossom: return blossom_spectrum(spec.n, spec.m);
    case ElementarySpec::Kind::bicycle: return bicycle_spectrum(spec.l, spec.n, spec.m);
  }
  throw Error(Errc::spec_invariant_violation, "unknown family");
}

ScanRow run_row(const ScanPlan& plan, std::size_t index) {
  const auto started = std::chrono::steady_clock::now();
  ScanRow row;
  row.spec = plan.rows[index];
  row.size = plan.sizes[index];
  row.alpha = plan.alpha;
  row.t_asymptotic = asymptotic_time(row.spec, plan.alpha);

  const SpectrumReport spectrum = alpha_shift(spectrum_for(row.spec), plan.alpha);
  const bool periodic = spectrum.classification == Classification::periodic_tail;
  row.t_exact = periodic ? std::numeric_limits<double>::infinity() : spectrum.time;

  const ElementaryInstance inst = build(row.spec);
  Rng rng(row_seed(plan.seed, index));
  const std::vector<double> v0 = rng.uniform_vector(inst.reduced_dim());
  const ProfitState x0 = from_reduced(inst, v0);
  const DynamicsConfig cfg{plan.alpha, plan.epsilon, plan.horizon};

  try {
    const Trajectory traj = simulate(inst.network, inst.matching, x0, cfg);
    row.steps_run = traj.steps_taken;
    ProfitState x_star;
    if (row.spec.kind == ElementarySpec::Kind::cycle) {
      if (periodic) {
        row.non_convergent = true;
        row.note = "periodic tail (eigenvalue -1 at alpha=1)";
      } else {
        // Limit is the consensus over the conserved reduced sum.
        const double mean =
            std::accumulate(v0.begin(), v0.end(), 0.0) / static_cast<double>(v0.size());
        x_star = from_reduced(inst, std::vector<double>(v0.size(), mean));
      }
    } else {
      // Path fixed point, or the fixed point shared by all branch cases of a
      // blossom/bicycle, which needs no settled-branch detection.
      x_star = from_reduced(inst, fixed_point(canonical_model(row.spec, plan.alpha)));
    }
    if (!row.non_convergent) {
      const RateFit fit = estimate_rate(traj, x_star);
      row.rate_empirical = fit.rate;
      row.t_empirical = 1.0 / fit.rate;
      row.emp_over_exact = row.t_empirical / row.t_exact;
      row.emp_over_asymptotic = row.t_empirical / row.t_asymptotic;
    }
  } catch (const Error& e) {
    row.non_convergent = true;
    row.note = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
  return row;
}

double fit_exponent(const std::vector<ScanRow>& rows, ScanFit& fit) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (const auto& row : rows) {
    if (row.non_convergent || !(row.t_empirical > 0.0)) continue;
    const double x = std::log(static_cast<double>(row.size));
    const double y = std::log(row.t_empirical);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  fit.rows_used = used;
  if (used < 2) return 0.0;
  const double n = used;
  fit.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.coefficient = std::exp((sy - fit.exponent * sx) / n);
  return fit.exponent;
}

}  // namespace

ScanResult run_scan(const ScanPlan& plan) {
  plan.check();
  ScanResult result;
  result.rows.resize(plan.rows.size());
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(plan.rows.size());
#pragma omp parallel for schedule(dynamic) if (count > 1)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    result.rows[i] = run_row(plan, static_cast<std::size_t>(i));
  fit_exponent(result.rows, result.fit);
  return result;
}

std::string scan_to_csv(const ScanResult& result, const ScanPlan& plan) {
  std::ostringstream out;
  // Run-dependent content is confined to this comment line.
  out << "# wall_ms";
  for (const auto& row : result.rows) out << ' ' << format_double(row.wall_ms);
  out << '\n';
  out << "family,l,n,m,size,alpha,T_exact,T_asymptotic,T_empirical,R_empirical,"
         "emp_over_exact,emp_over_asymptotic,steps_run,flag\n";
  for (const auto& row : result.rows) {
    out << kind_name(row.spec.kind) << ',' << row.spec.l << ',' << row.spec.n << ','
        << row.spec.m << ',' << row.size << ',' << format_double(plan.alpha) << ','
        << format_double(row.t_exact) << ',' << format_double(row.t_asymptotic) << ','
        << format_double(row.t_empirical) << ',' << format_double(row.rate_empirical) << ','
        << format_double(row.emp_over_exact) << ',' << format_double(row.emp_over_asymptotic)
        << ',' << row.steps_run << ',' << (row.non_convergent ? "NON_CONVERGENT" : "OK") << '\n';
  }
  return out.str();
}

std::string scan_summary_json(const ScanResult& result, const ScanPlan& plan) {
  nlohmann::json doc;
  doc["alpha"] = plan.alpha;
  doc["epsilon"] = plan.epsilon;
  doc["horizon"] = plan.horizon;
  doc["seed"] = plan.seed;
  doc["fit"] = {{"exponent", result.fit.exponent},
                {"coefficient", result.fit.coefficient},
                {"rows_used", result.fit.rows_used}};
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    nlohmann::json r;
    r["spec"] = spec_to_string(row.spec);
    r["size"] = row.size;
    r["T_exact"] = row.t_exact;
    r["T_asymptotic"] = row.t_asymptotic;
    r["T_empirical"] = row.t_empirical;
    r["R_empirical"] = row.rate_empirical;
    r["emp_over_exact"] = row.emp_over_exact;
    r["emp_over_asymptotic"] = row.emp_over_asymptotic;
    r["steps_run"] = row.steps_run;
    r["flag"] = row.non_convergent ? "NON_CONVERGENT" : "OK";
    if (!row.note.empty()) r["note"] = row.note;
    doc["rows"].push_back(r);
  }
  return doc.dump(2) + "\n";
}

}  // namespace bargain
