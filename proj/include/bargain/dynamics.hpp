// Edge-balanced bargaining dynamics: each matched player moves toward the
// Nash split of the current pair surplus over outside options, smoothed by
// alpha and clamped to [0, w]. Updates are synchronous (all nodes read the
// time-t state), which makes the inner loop data-parallel; the OpenMP kernel
// is paired with a serial reference that tests hold bit-identical.
#pragma once

#include <cstdint>
#include <vector>

#include "bargain/graph.hpp"

namespace bargain {

struct DynamicsConfig {
  double alpha = 1.0;     // smoothing, in (0, 1]
  double epsilon = 1e-10; // sup-norm convergence threshold on successive states
  long horizon = 100000;  // maximum number of steps

  void check() const;
};

struct Trajectory {
  std::vector<ProfitState> states;  // states[0] = x0, one entry per step after
  bool converged = false;
  long steps_taken = 0;

  const ProfitState& last() const { return states.back(); }
};

// Precomputed per-(network, matching) structure so the step kernel touches
// flat arrays only. Construction is O(nodes + edges).
class MatchedSystem {
 public:
  MatchedSystem(const ExchangeNetwork& net, const Matching& m);

  int node_count() const { return node_count_; }
  double max_weight() const { return max_weight_; }

  // One synchronous update, OpenMP-parallel over nodes. Bit-identical to
  // step_serial for any thread count. y_scratch must hold node_count values.
  void step(const ProfitState& x, double alpha, ProfitState& out,
            std::vector<double>& y_scratch) const;

  // Serial reference implementation of the same update.
  void step_serial(const ProfitState& x, double alpha, ProfitState& out,
                   std::vector<double>& y_scratch) const;

 private:
  void compute_alternates(const ProfitState& x, std::vector<double>& y, bool parallel) const;
  void apply_updates(const ProfitState& x, const std::vector<double>& y, double alpha,
                     ProfitState& out, bool parallel) const;

  int node_count_ = 0;
  double max_weight_ = 0.0;
  std::vector<int> partner_;         // -1 for unmatched
  std::vector<double> pair_weight_;  // weight of the matched edge, per matched node
  std::vector<char> frozen_;         // pinned or unmatched: value never changes
  // Unmatched incident edges, CSR layout.
  std::vector<int> alt_offsets_;
  std::vector<int> alt_nodes_;
  std::vector<double> alt_weights_;
};

// Convenience one-shot step (builds the MatchedSystem internally).
ProfitState step(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                 double alpha);
ProfitState step_serial(const ExchangeNetwork& net, const Matching& m, const ProfitState& x,
                        double alpha);

// Iterates step() until the successive-iterate sup-norm drops to epsilon or
// the horizon is reached. Running out of horizon is not an error; the
// trajectory is returned with converged = false.
Trajectory simulate(const ExchangeNetwork& net, const Matching& m, const ProfitState& x0,
                    const DynamicsConfig& cfg);

struct RateFit {
  double rate = 0.0;       // R_emp: negated slope of the log-residual fit
  double intercept = 0.0;
  double rms = 0.0;        // RMS of log-residuals about the fitted line
  std::size_t window_begin = 0;
  std::size_t window_end = 0;  // one past the last fitted sample
};

// Least-squares decay-rate fit of log r(t) over the tail window (the last
// half of the samples above the residual floor). Throws
// Error(at_fixed_point) when residuals sit below the floor from t = 0 and
// Error(insufficient_decay) when there is no usable decaying tail.
RateFit fit_log_decay(const std::vector<double>& residuals, double floor);

// Empirical convergence rate of a trajectory toward x_star, using sup-norm
// residuals. The residual floor is 100 * machine epsilon * scale; scale
// defaults to max(1, |x0|_inf, |x_star|_inf).
RateFit estimate_rate(const Trajectory& traj, const ProfitState& x_star, double scale = 0.0);

struct TailPeriodicity {
  double max_period2_delta = 0.0;  // max over tail of |x(t+2) - x(t)|_inf
  double min_period1_delta = 0.0;  // min over tail of |x(t+1) - x(t)|_inf
};

// Inspects the last `window` steps of a trajectory for a period-2 tail.
TailPeriodicity tail_periodicity(const Trajectory& traj, std::size_t window);

}  // namespace bargain
