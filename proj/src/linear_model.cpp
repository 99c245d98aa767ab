#include "bargain/linear_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bargain {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void shift_alpha(LinearModel& model) {
  const double alpha = model.alpha;
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(Errc::spec_invariant_violation, "alpha must be in (0, 1]");
  if (alpha == 1.0) return;
  for (int i = 0; i < model.dim; ++i) {
    for (int j = 0; j < model.dim; ++j) model.a(i, j) *= alpha;
    model.a(i, i) += 1.0 - alpha;
    model.b[i] *= alpha;
  }
}

void put_tridiagonal(Matrix& a, int begin, int count) {
  for (int i = 0; i < count; ++i) {
    if (i > 0) a(begin + i, begin + i - 1) = 0.5;
    if (i + 1 < count) a(begin + i, begin + i + 1) = 0.5;
  }
}

}  // namespace

LinearModel build_path(int n, double x_plus, double x_minus, double alpha) {
  ElementarySpec spec{ElementarySpec::Kind::path, n, 0, 0, x_plus, x_minus};
  spec.check();
  LinearModel model{spec, n, Matrix(n, n), std::vector<double>(n, 0.0), alpha};
  put_tridiagonal(model.a, 0, n);
  if (n == 1) {
    // both boundary terms collapse onto the single row
    model.b[0] = 0.5 * (1.0 - x_plus + x_minus);
  } else {
    model.b[0] = 0.5 * (1.0 - x_plus);
    model.b[n - 1] = 0.5 * x_minus;
  }
  shift_alpha(model);
  return model;
}

LinearModel build_cycle(int n, double alpha) {
  ElementarySpec spec{ElementarySpec::Kind::cycle, n};
  spec.check();
  LinearModel model{spec, n, Matrix(n, n), std::vector<double>(n, 0.0), alpha};
  if (n == 2) {
    model.a(0, 1) = 1.0;
    model.a(1, 0) = 1.0;
  } else {
    for (int i = 0; i < n; ++i) {
      model.a(i, (i + 1) % n) = 0.5;
      model.a(i, (i + n - 1) % n) = 0.5;
    }
  }
  shift_alpha(model);
  return model;
}

LinearModel build_blossom(int n, int m, int branch_case, double alpha) {
  ElementarySpec spec{ElementarySpec::Kind::blossom, n, m};
  spec.check();
  if (branch_case != 1 && branch_case != 2)
    throw Error(Errc::spec_invariant_violation, "blossom case must be 1 or 2");
  const int dim = n + m;
  LinearModel model{spec, dim, Matrix(dim, dim), std::vector<double>(dim, 0.0), alpha,
                    branch_case};
  put_tridiagonal(model.a, 0, n);  // stem block T_n
  put_tridiagonal(model.a, n, m);  // loop block T_m
  // gateway row x_n: max over (1 - y_1, y_m)
  if (branch_case == 1) {
    model.a(n - 1, n) += 0.5;  // + y_1 / 2
  } else {
    model.a(n - 1, dim - 1) += -0.5;  // - y_m / 2
    model.b[n - 1] = 0.5;
  }
  // loop rows coupled to the stem through the gateway value 1 - x_n
  model.a(n, n - 1) += 0.5;        // y_1' = (x_n + y_2) / 2
  model.a(dim - 1, n - 1) += -0.5; // y_m' = (1 + y_{m-1} - x_n) / 2
  model.b[dim - 1] = 0.5;
  shift_alpha(model);
  return model;
}

LinearModel build_bicycle(int l, int n, int m, int case_loop1, int case_loop2, double alpha) {
  ElementarySpec spec{ElementarySpec::Kind::bicycle, n, m, l};
  spec.check();
  for (int c : {case_loop1, case_loop2})
    if (c != 1 && c != 2)
      throw Error(Errc::spec_invariant_violation, "bicycle cases must be 1 or 2");
  const int dim = l + n + m;
  LinearModel model{spec, dim, Matrix(dim, dim), std::vector<double>(dim, 0.0), alpha,
                    case_loop1, case_loop2};
  put_tridiagonal(model.a, 0, l);      // loop 1 (z)
  put_tridiagonal(model.a, l, n);      // cross-bar (x)
  put_tridiagonal(model.a, l + n, m);  // loop 2 (y)

  // loop 1 sees the gateway value x_1 directly:
  //   z_1' = (1 + z_2 - x_1)/2,  z_l' = (z_{l-1} + x_1)/2
  model.a(0, l) += -0.5;
  model.b[0] = 0.5;
  model.a(l - 1, l) += 0.5;

  // bar row x_1: max over (1 - z_1, z_l)
  if (case_loop1 == 1) {
    model.a(l, 0) += -0.5;
    model.b[l] += 0.5;
  } else {
    model.a(l, l - 1) += 0.5;
  }
  // bar row x_n: max over (1 - y_1, y_m), exactly as for the blossom
  const int xn = l + n - 1;
  if (case_loop2 == 1) {
    model.a(xn, l + n) += 0.5;
  } else {
    model.a(xn, dim - 1) += -0.5;
    model.b[xn] += 0.5;
  }
  // loop 2 sees the gateway value 1 - x_n:
  model.a(l + n, xn) += 0.5;
  model.a(dim - 1, xn) += -0.5;
  model.b[dim - 1] = 0.5;
  shift_alpha(model);
  return model;
}

std::vector<double> linear_step(const LinearModel& model, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != model.dim)
    throw Error(Errc::dimension_mismatch, "state has wrong dimension");
  std::vector<double> out(v.size());
  matvec(model.a, v, model.b, out);
  return out;
}

Trajectory linear_simulate(const LinearModel& model, const std::vector<double>& v0,
                           const DynamicsConfig& cfg) {
  cfg.check();
  if (static_cast<int>(v0.size()) != model.dim)
    throw Error(Errc::dimension_mismatch, "state has wrong dimension");
  Trajectory traj;
  traj.states.push_back(v0);
  std::vector<double> next(v0.size());
  for (long t = 0; t < cfg.horizon; ++t) {
    matvec(model.a, traj.states.back(), model.b, next);
    traj.states.push_back(next);
    ++traj.steps_taken;
    const auto& prev = traj.states[traj.states.size() - 2];
    if (sup_norm_diff(next, prev) <= cfg.epsilon) {
      traj.converged = true;
      break;
    }
  }
  return traj;
}

std::vector<double> fixed_point(const LinearModel& model) {
  Matrix lhs(model.dim, model.dim);
  for (int i = 0; i < model.dim; ++i)
    for (int j = 0; j < model.dim; ++j) lhs(i, j) = (i == j ? 1.0 : 0.0) - model.a(i, j);
  auto x = solve_linear(lhs, model.b);
  std::vector<double> residual(model.dim);
  matvec_serial(lhs, x, {}, residual);
  double err = 0.0;
  for (int i = 0; i < model.dim; ++i) err = std::max(err, std::abs(residual[i] - model.b[i]));
  if (err > 1e-12 * model.dim)
    throw Error(Errc::singular_system, "fixed-point residual " + std::to_string(err));
  return x;
}

double loop_sum_closed_form(int m, const std::vector<double>& y0, long t) {
  if (m < 2) throw Error(Errc::spec_invariant_violation, "loop sum needs m >= 2");
  if (static_cast<int>(y0.size()) != m)
    throw Error(Errc::dimension_mismatch, "y0 has wrong dimension");
  if (t < 0) throw Error(Errc::spec_invariant_violation, "t must be >= 0");
  const double pi = std::numbers::pi;
  double sum = 0.0;
  for (int k = 1; k <= m; k += 2) {
    const double angle = pi * k / (m + 1);
    const double lambda = std::cos(angle);
    // v_k^T y0 with v_{k,i} = sqrt(2/(m+1)) sin(angle * i)
    double proj = 0.0;
    for (int i = 1; i <= m; ++i) proj += std::sin(angle * i) * y0[i - 1];
    proj *= std::sqrt(2.0 / (m + 1));
    const double f =
        1.0 + lambda - 2.0 * std::sqrt(1.0 - lambda * lambda) * std::sqrt((m + 1) / 2.0) * proj;
    sum += f * std::pow(lambda, static_cast<double>(t));
  }
  return 1.0 - 2.0 / (m + 1) * sum;
}

long default_linearization_horizon(const ElementarySpec& spec) {
  const long d = spec.reduced_dim();
  return 50 * d * d;
}

LinearizationReport analyze_linearization(const ElementaryInstance& inst, Trajectory trajectory) {
  const auto kind = inst.spec.kind;
  if (kind != ElementarySpec::Kind::blossom && kind != ElementarySpec::Kind::bicycle)
    throw Error(Errc::spec_invariant_violation,
                "linearization detection applies to blossoms and bicycles");

  // (first, last) representative ordinals of each loop, in reduced order.
  std::vector<std::pair<int, int>> loop_bounds;
  if (kind == ElementarySpec::Kind::blossom) {
    loop_bounds.emplace_back(inst.spec.n, inst.spec.n + inst.spec.m - 1);
  } else {
    loop_bounds.emplace_back(0, inst.spec.l - 1);
    loop_bounds.emplace_back(inst.spec.l + inst.spec.n,
                             inst.spec.l + inst.spec.n + inst.spec.m - 1);
  }

  LinearizationReport report;
  report.trajectory = std::move(trajectory);
  const auto& states = report.trajectory.states;
  report.horizon_used = static_cast<long>(states.size()) - 1;

  const double tie_floor = 100.0 * kEps;
  for (auto [first, last] : loop_bounds) {
    const int rep_first = inst.reduced_index[first];
    const int rep_last = inst.reduced_index[last];
    // Branch sign per sampled step; 0 marks a tie (end-sum at 1 within the
    // floor), which never counts as a flip.
    std::vector<int> sign(states.size());
    double final_sum = 1.0;
    int final_sign = 0;
    for (std::size_t t = 0; t < states.size(); ++t) {
      const double u = 1.0 - states[t][rep_first] - states[t][rep_last];
      sign[t] = std::abs(u) <= tie_floor ? 0 : (u > 0.0 ? 1 : -1);
      if (sign[t] != 0) {
        final_sign = sign[t];
        final_sum = states[t][rep_first] + states[t][rep_last];
      }
    }
    LoopLinearization loop;
    loop.final_end_sum = final_sum;
    loop.settled_case = final_sign >= 0 ? 1 : 2;  // ties resolve to Case 1
    long last_flip = -1;
    for (std::size_t t = 0; t < states.size(); ++t)
      if (sign[t] != 0 && sign[t] != final_sign) last_flip = static_cast<long>(t);
    loop.t0 = last_flip + 1;  // 0 when the sign never flips
    if (last_flip >= 0 && last_flip * 10 >= report.horizon_used * 9)
      throw Error(Errc::horizon_too_short, "branch sign still flipping at step " +
                                               std::to_string(last_flip) + " of " +
                                               std::to_string(report.horizon_used));
    report.loops.push_back(loop);
    report.t0 = std::max(report.t0, loop.t0);
  }
  return report;
}

LinearizationReport detect_linearization(const ElementaryInstance& inst, const ProfitState& x0,
                                         const DynamicsConfig& cfg) {
  return analyze_linearization(inst, simulate(inst.network, inst.matching, x0, cfg));
}

LinearModel settled_model(const ElementarySpec& spec, const LinearizationReport& report,
                          double alpha) {
  if (spec.kind == ElementarySpec::Kind::blossom)
    return build_blossom(spec.n, spec.m, report.loops.at(0).settled_case, alpha);
  if (spec.kind == ElementarySpec::Kind::bicycle)
    return build_bicycle(spec.l, spec.n, spec.m, report.loops.at(0).settled_case,
                         report.loops.at(1).settled_case, alpha);
  throw Error(Errc::spec_invariant_violation, "no settled model for this family");
}

LinearModel canonical_model(const ElementarySpec& spec, double alpha) {
  switch (spec.kind) {
    case ElementarySpec::Kind::path:
      return build_path(spec.n, spec.x_plus, spec.x_minus, alpha);
    case ElementarySpec::Kind::cycle: return build_cycle(spec.n, alpha);
    case ElementarySpec::Kind::blossom: return build_blossom(spec.n, spec.m, 1, alpha);
    case ElementarySpec::Kind::bicycle:
      return build_bicycle(spec.l, spec.n, spec.m, 1, 1, alpha);
  }
  throw Error(Errc::spec_invariant_violation, "unknown family");
}

}  // namespace bargain
