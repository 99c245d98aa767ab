#include "bargain/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bargain/linalg.hpp"

namespace bargain {

namespace {
// Below this node count the parallel region costs more than it saves.
constexpr int kStepParallelCutoff = 4096;
constexpr double kEps = std::numeric_limits<double>::epsilon();
}  // namespace

void DynamicsConfig::check() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(Errc::spec_invariant_violation, "alpha must be in (0, 1]");
  if (!(epsilon > 0.0))
    throw Error(Errc::spec_invariant_violation, "epsilon must be positive");
  if (horizon < 1) throw Error(Errc::spec_invariant_violation, "horizon must be >= 1");
}

MatchedSystem::MatchedSystem(const ExchangeNetwork& net, const Matching& m)
    : node_count_(net.node_count()), max_weight_(net.max_weight()) {
  partner_ = m.partner_map(node_count_);
  pair_weight_.assign(node_count_, 0.0);
  frozen_.assign(node_count_, 0);
  for (int i = 0; i < node_count_; ++i) {
    if (partner_[i] >= 0)
      pair_weight_[i] = net.weight(i, partner_[i]);
    else
      frozen_[i] = 1;  // unmatched nodes never update; pinned nodes are never matched
    if (net.is_pinned(i)) frozen_[i] = 1;
  }
  alt_offsets_.assign(node_count_ + 1, 0);
  for (int i = 0; i < node_count_; ++i) {
    int count = 0;
    for (const auto& nb : net.neighbors(i))
      if (nb.node != partner_[i]) ++count;
    alt_offsets_[i + 1] = alt_offsets_[i] + count;
  }
  alt_nodes_.resize(alt_offsets_.back());
  alt_weights_.resize(alt_offsets_.back());
  for (int i = 0; i < node_count_; ++i) {
    int c = alt_offsets_[i];
    for (const auto& nb : net.neighbors(i)) {
      if (nb.node == partner_[i]) continue;
      alt_nodes_[c] = nb.node;
      alt_weights_[c] = nb.weight;
      ++c;
    }
  }
}

void MatchedSystem::compute_alternates(const ProfitState& x, std::vector<double>& y,
                                       bool parallel) const {
  const int n = node_count_;
  const auto one = [&](int i) {
    if (partner_[i] < 0) {
      y[i] = 0.0;
      return;
    }
    double best = 0.0;
    for (int k = alt_offsets_[i]; k < alt_offsets_[i + 1]; ++k)
      best = std::max(best, alt_weights_[k] - x[alt_nodes_[k]]);
    y[i] = std::max(best, 0.0);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }
}

void MatchedSystem::apply_updates(const ProfitState& x, const std::vector<double>& y, double alpha,
                                  ProfitState& out, bool parallel) const {
  const int n = node_count_;
  const auto one = [&](int i) {
    if (frozen_[i]) {
      out[i] = x[i];
      return;
    }
    const double w = pair_weight_[i];
    const double target =
        std::min(std::max(y[i] + 0.5 * (w - y[i] - y[partner_[i]]), 0.0), w);
    out[i] = x[i] + alpha * (target - x[i]);
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) one(i);
  } else {
    for (int i = 0; i < n; ++i) one(i);
  }
}

void MatchedSystem::step(const ProfitState& x, double alpha, ProfitState& out,
                         std::vector<double>& y_scratch) const {
  const bool parallel = node_count_ >= kStepParallelCutoff;
  compute_alternates(x, y_scratch, parallel);
  apply_updates(x, y_scratch, alpha, out, parallel);
}

void MatchedSystem::step_serial(const ProfitState& x, double alpha, ProfitState& out,
                                std::vector<double>& y_scratch) const {
  compute_alternates(x, y_scratch, false);
  apply_updates(x, y_scratch, alpha, out, false);
}

ProfitState step(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                 double alpha) {
  MatchedSystem sys(net, m);
  ProfitState out(x.size());
  std::vector<double> y(x.size());
  sys.step(x, alpha, out, y);
  return out;
}

ProfitState step_serial(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                        double alpha) {
  MatchedSystem sys(net, m);
  ProfitState out(x.size());
  std::vector<double> y(x.size());
  sys.step_serial(x, alpha, out, y);
  return out;
}

Trajectory simulate(const ExchangeNetwork& net, const Matching& m, const ProfitState& x0,
                    const DynamicsConfig& cfg) {
  cfg.check();
  if (static_cast<int>(x0.size()) != net.node_count())
    throw Error(Errc::dimension_mismatch, "x0 size does not match node count");
  for (double v : x0)
    if (!std::isfinite(v)) throw Error(Errc::spec_invariant_violation, "x0 must be finite");

  MatchedSystem sys(net, m);
  Trajectory traj;
  traj.states.push_back(x0);
  ProfitState next(x0.size());
  std::vector<double> y(x0.size());
  for (long t = 0; t < cfg.horizon; ++t) {
    sys.step(traj.states.back(), cfg.alpha, next, y);
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

RateFit fit_log_decay(const std::vector<double>& residuals, double floor) {
  if (residuals.empty()) throw Error(Errc::insufficient_decay, "empty residual sequence");
  if (residuals.front() <= floor)
    throw Error(Errc::at_fixed_point, "residuals below floor from t=0");

  // Pre-floor prefix: samples strictly above the rounding floor.
  std::size_t prefix = residuals.size();
  for (std::size_t t = 0; t < residuals.size(); ++t) {
    if (residuals[t] <= floor) {
      prefix = t;
      break;
    }
  }
  const std::size_t window = (prefix + 1) / 2;
  if (window < 10)
    throw Error(Errc::insufficient_decay,
                "only " + std::to_string(prefix) + " samples above the residual floor");
  const std::size_t begin = prefix - window;
  if (residuals[prefix - 1] >= residuals[begin])
    throw Error(Errc::insufficient_decay, "residuals do not decrease over the tail window");

  // Least-squares line through (t, log r_t) over the window.
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  for (std::size_t t = begin; t < prefix; ++t) {
    const double lt = static_cast<double>(t);
    const double ly = std::log(residuals[t]);
    st += lt;
    sy += ly;
    stt += lt * lt;
    sty += lt * ly;
  }
  const double n = static_cast<double>(window);
  const double denom = n * stt - st * st;
  const double slope = (n * sty - st * sy) / denom;
  const double intercept = (sy - slope * st) / n;

  RateFit fit;
  fit.rate = -slope;
  fit.intercept = intercept;
  fit.window_begin = begin;
  fit.window_end = prefix;
  double ss = 0.0;
  for (std::size_t t = begin; t < prefix; ++t) {
    const double d = std::log(residuals[t]) - (intercept + slope * static_cast<double>(t));
    ss += d * d;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

RateFit estimate_rate(const Trajectory& traj, const ProfitState& x_star, double scale) {
  for (double v : x_star)
    if (!std::isfinite(v)) throw Error(Errc::spec_invariant_violation, "x_star must be finite");
  std::vector<double> residuals;
  residuals.reserve(traj.states.size());
  for (const auto& s : traj.states) residuals.push_back(sup_norm_diff(s, x_star));
  if (scale <= 0.0) {
    scale = 1.0;
    for (double v : traj.states.front()) scale = std::max(scale, std::abs(v));
    for (double v : x_star) scale = std::max(scale, std::abs(v));
  }
  return fit_log_decay(residuals, 100.0 * kEps * scale);
}

TailPeriodicity tail_periodicity(const Trajectory& traj, std::size_t window) {
  const std::size_t n = traj.states.size();
  if (n < window + 2)
    throw Error(Errc::horizon_too_short, "trajectory shorter than the requested tail window");
  TailPeriodicity out;
  out.min_period1_delta = std::numeric_limits<double>::infinity();
  for (std::size_t t = n - window - 2; t + 2 < n; ++t) {
    out.max_period2_delta =
        std::max(out.max_period2_delta, sup_norm_diff(traj.states[t + 2], traj.states[t]));
    out.min_period1_delta =
        std::min(out.min_period1_delta, sup_norm_diff(traj.states[t + 1], traj.states[t]));
  }
  return out;
}

}  // namespace bargain
