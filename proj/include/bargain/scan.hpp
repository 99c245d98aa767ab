// Convergence-time scaling scans: for a family and a size ladder, compare the
// exact spectral time, the leading-order theorem time, and the empirical time
// fitted from a simulated trajectory with seeded random initialization.
// Rows are independent and run OpenMP-parallel; output is written afterwards.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bargain/elementary.hpp"

namespace bargain {

struct ScanPlan {
  std::vector<ElementarySpec> rows;
  std::vector<int> sizes;  // varied size per row, used for the exponent fit
  double alpha = 1.0;
  double epsilon = 1e-13;
  long horizon = 200000;
  std::uint64_t seed = 12345;

  void check() const;
};

// Builds a plan varying n (path, cycle) or the loop size m (blossom,
// bicycle), with the remaining sizes taken from `base`.
ScanPlan make_scan_plan(const ElementarySpec& base, const std::vector<int>& sizes);

struct ScanRow {
  ElementarySpec spec;
  int size = 0;
  double alpha = 1.0;
  double t_exact = 0.0;       // 1/R from the (shifted) closed-form spectrum
  double t_asymptotic = 0.0;  // theorem leading order
  double t_empirical = 0.0;   // 1/R_emp from the simulated trajectory
  double rate_empirical = 0.0;
  double emp_over_exact = 0.0;
  double emp_over_asymptotic = 0.0;
  long steps_run = 0;
  double wall_ms = 0.0;
  bool non_convergent = false;
  std::string note;  // failure detail when non_convergent
};

struct ScanFit {
  double exponent = 0.0;     // p in T_empirical ~ c * size^p
  double coefficient = 0.0;  // c
  int rows_used = 0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  ScanFit fit;
};

ScanResult run_scan(const ScanPlan& plan);

// One "# ..." comment line carrying per-row wall times (the only
// run-dependent content), then a header and one row per size.
std::string scan_to_csv(const ScanResult& result, const ScanPlan& plan);
std::string scan_summary_json(const ScanResult& result, const ScanPlan& plan);

}  // namespace bargain
