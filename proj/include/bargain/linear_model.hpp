// The (eventually) linear systems v(t+1) = A v(t) + b behind each elementary
// structure, in reduced per-matched-edge coordinates. Stored matrices are
// already alpha-shifted: A = (1 - alpha) I + alpha A0 and b = alpha b0, where
// A0, b0 describe the alpha = 1 update.
//
// Blossom and bicycle gateways take a max over two loop-side options, so the
// exact dynamics is piecewise linear; each branch is one (A, b) pair. The
// branch convention is uniform per loop: Case 1 holds when the loop end-sum
// (y_1 + y_m, resp. z_1 + z_l) is <= 1, Case 2 when it exceeds 1. Exact ties
// resolve to Case 1.
#pragma once

#include <vector>

#include "bargain/dynamics.hpp"
#include "bargain/elementary.hpp"
#include "bargain/linalg.hpp"

namespace bargain {

struct LinearModel {
  ElementarySpec spec;
  int dim = 0;
  Matrix a;               // alpha-shifted update matrix
  std::vector<double> b;  // alpha-scaled offset
  double alpha = 1.0;
  int case_loop1 = 0;  // blossom: its single loop; bicycle: loop 1 (z); 0 = n/a
  int case_loop2 = 0;  // bicycle loop 2 (y); 0 = n/a
};

LinearModel build_path(int n, double x_plus, double x_minus, double alpha);
LinearModel build_cycle(int n, double alpha);
LinearModel build_blossom(int n, int m, int branch_case, double alpha);
LinearModel build_bicycle(int l, int n, int m, int case_loop1, int case_loop2, double alpha);

// v' = A v + b. Throws Error(dimension_mismatch).
std::vector<double> linear_step(const LinearModel& model, const std::vector<double>& v);

// Same convergence semantics as dynamics::simulate, in reduced coordinates.
Trajectory linear_simulate(const LinearModel& model, const std::vector<double>& v0,
                           const DynamicsConfig& cfg);

// x* = (I - A)^{-1} b via elimination with partial pivoting. Throws
// Error(singular_system) when I - A is singular (cycles: the limit depends
// on the initial condition). The solution satisfies
// |(I - A) x* - b|_inf <= 1e-12 * dim.
std::vector<double> fixed_point(const LinearModel& model);

// Closed form of the loop end-sum y_1(t) + y_m(t) for a blossom loop of m
// matched edges with initial loop state y0; autonomous of the stem.
double loop_sum_closed_form(int m, const std::vector<double>& y0, long t);

struct LoopLinearization {
  long t0 = 0;          // first step index from which the branch sign is settled
  int settled_case = 1;  // 1 or 2
  double final_end_sum = 0.0;
};

struct LinearizationReport {
  long t0 = 0;  // max over loops
  std::vector<LoopLinearization> loops;  // blossom: 1 entry; bicycle: loop1, loop2
  long horizon_used = 0;
  Trajectory trajectory;  // the nonlinear trajectory that was inspected
};

// Finds the time T0 after which each gateway max-branch is constant along a
// simulated trajectory. T0 per loop is 1 + the last step whose branch sign
// differs from the final sampled sign (0 when the sign never flips).
// End-sums within 100 * machine epsilon of 1 are treated as exact ties
// (Case 1) and do not count as flips. Throws Error(horizon_too_short) if a
// sign flip occurs in the last 10% of the sampled steps; for odd loops this
// can persist for every horizon, since the loop spectrum pairs lambda_1 with
// -lambda_1 and an initial state may excite the alternating mode hardest.
LinearizationReport analyze_linearization(const ElementaryInstance& inst, Trajectory trajectory);

// Simulates the nonlinear dynamics from x0, then analyzes the trajectory.
LinearizationReport detect_linearization(const ElementaryInstance& inst, const ProfitState& x0,
                                         const DynamicsConfig& cfg);

// Default detection horizon: 50 * (matched edges)^2.
long default_linearization_horizon(const ElementarySpec& spec);

// The linear model matching a detected report (same alpha as the detection).
LinearModel settled_model(const ElementarySpec& spec, const LinearizationReport& report,
                          double alpha);

// The Case-1 (resp. (1,1)) model for any family. Every branch case shares one
// fixed point: the loop-sum relation pins each loop end-sum to 1 at any fixed
// point, which is exactly the branch tie, so this model's fixed point is the
// fixed point of all of them.
LinearModel canonical_model(const ElementarySpec& spec, double alpha);

}  // namespace bargain
