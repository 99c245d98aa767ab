#include "bargain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bargain {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kOneBand = 1e-15;  // moduli within this of 1 count as 1

void classify(SpectrumReport& report) {
  bool has_minus_one = false;
  double rho = 0.0;
  double lambda2 = 0.0;
  for (const auto& e : report.eigenvalues) {
    const double mod = std::abs(e.value);
    rho = std::max(rho, mod);
    if (e.value <= -1.0 + kOneBand) has_minus_one = true;
    if (mod < 1.0 - kOneBand) lambda2 = std::max(lambda2, mod);
  }
  report.rho = rho;
  report.lambda2 = lambda2;
  if (has_minus_one) {
    report.classification = Classification::periodic_tail;
    report.rate = std::numeric_limits<double>::quiet_NaN();
    report.time = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const bool global = rho < 1.0 - kOneBand;
  report.classification = global ? Classification::globally_asymptotically_stable
                                 : Classification::asymptotically_stable;
  const double decisive = global ? rho : lambda2;
  if (decisive <= 0.0) {
    report.rate = std::numeric_limits<double>::infinity();
    report.time = 0.0;
  } else {
    report.rate = -std::log(decisive);
    report.time = 1.0 / report.rate;
  }
}

}  // namespace

const char* family_tag_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::lambda: return "lambda";
    case FamilyTag::mu: return "mu";
    case FamilyTag::minus_one: return "minus_one";
  }
  return "?";
}

const char* classification_name(Classification c) {
  switch (c) {
    case Classification::globally_asymptotically_stable: return "GloballyAsymptoticallyStable";
    case Classification::asymptotically_stable: return "AsymptoticallyStable";
    case Classification::periodic_tail: return "PeriodicTail";
  }
  return "?";
}

SpectrumReport path_spectrum(int n) {
  ElementarySpec spec{ElementarySpec::Kind::path, n};
  spec.check();
  SpectrumReport report;
  report.spec = spec;
  report.eigenvectors = Matrix(n, n);
  const double norm = std::sqrt(2.0 / (n + 1));
  for (int k = 1; k <= n; ++k) {
    const double angle = kPi * k / (n + 1);
    report.eigenvalues.push_back({std::cos(angle), FamilyTag::lambda, k});
    for (int j = 1; j <= n; ++j) report.eigenvectors(k - 1, j - 1) = norm * std::sin(angle * j);
  }
  classify(report);
  return report;
}

SpectrumReport cycle_spectrum(int n) {
  ElementarySpec spec{ElementarySpec::Kind::cycle, n};
  spec.check();
  SpectrumReport report;
  report.spec = spec;
  for (int k = 1; k <= n; ++k) {
    if (n % 2 == 0 && k == 1 + n / 2) {
      report.eigenvalues.push_back({-1.0, FamilyTag::minus_one, k});
      continue;
    }
    report.eigenvalues.push_back({std::cos(2.0 * kPi * (k - 1) / n), FamilyTag::lambda, k});
  }
  classify(report);
  return report;
}

SpectrumReport blossom_spectrum(int n, int m) {
  ElementarySpec spec{ElementarySpec::Kind::blossom, n, m};
  spec.check();
  SpectrumReport report;
  report.spec = spec;
  for (int k = 1; k <= n + m / 2; ++k)
    report.eigenvalues.push_back({std::cos(2.0 * kPi * k / (2 * n + m + 1)), FamilyTag::lambda, k});
  for (int k = 1; k <= (m + 1) / 2; ++k)
    report.eigenvalues.push_back({std::cos(kPi * (2 * k - 1) / (m + 1)), FamilyTag::mu, k});
  classify(report);
  return report;
}

SpectrumReport bicycle_spectrum(int l, int n, int m) {
  ElementarySpec spec{ElementarySpec::Kind::bicycle, n, m, l};
  spec.check();
  SpectrumReport report;
  report.spec = spec;
  for (int k = 1; k <= (l + 1) / 2; ++k)
    report.eigenvalues.push_back({std::cos(kPi * (2 * k - 1) / (l + 1)), FamilyTag::mu, k});
  for (int k = 1; k <= (m + 1) / 2; ++k)
    report.eigenvalues.push_back({std::cos(kPi * (2 * k - 1) / (m + 1)), FamilyTag::mu, k});
  const int third_count = n + l / 2 + m / 2;
  const bool both_even = l % 2 == 0 && m % 2 == 0;
  for (int k = 1; k <= third_count; ++k) {
    // With l and m both even the last index lands exactly on cos(pi) = -1.
    if (both_even && k == third_count) {
      report.eigenvalues.push_back({-1.0, FamilyTag::minus_one, k});
      continue;
    }
    report.eigenvalues.push_back(
        {std::cos(2.0 * kPi * k / (2 * n + l + m)), FamilyTag::lambda, k});
  }
  classify(report);
  return report;
}

SpectrumReport alpha_shift(const SpectrumReport& report, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(Errc::spec_invariant_violation, "alpha must be in (0, 1]");
  SpectrumReport shifted = report;
  shifted.alpha = report.alpha * alpha;
  for (auto& e : shifted.eigenvalues) e.value = 1.0 - alpha + alpha * e.value;
  classify(shifted);
  return shifted;
}

RateTime convergence_time(const SpectrumReport& report) {
  if (report.classification == Classification::periodic_tail)
    throw Error(Errc::periodic_no_convergence,
                "eigenvalue -1 present; asymptotic behavior is periodic");
  return {report.rate, report.time};
}

double asymptotic_time(const ElementarySpec& spec, double alpha) {
  spec.check();
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw Error(Errc::spec_invariant_violation, "alpha must be in (0, 1]");
  const double pi2 = kPi * kPi;
  const double n = spec.n;
  const double m = spec.m;
  const double l = spec.l;
  switch (spec.kind) {
    case ElementarySpec::Kind::path: return 2.0 * n * n / (alpha * pi2);
    case ElementarySpec::Kind::cycle: return n * n / (2.0 * alpha * pi2);
    case ElementarySpec::Kind::blossom: {
      const double s = 2.0 * n + m;
      if (spec.m % 2 == 0) return 2.0 * s * s / (alpha * pi2);
      return 2.0 * std::max(m * m, 0.25 * s * s) / (alpha * pi2);
    }
    case ElementarySpec::Kind::bicycle: {
      const double s = 2.0 * n + m + l;
      if (spec.m % 2 == 0 || spec.l % 2 == 0) return 2.0 * s * s / (alpha * pi2);
      return 2.0 * std::max({m * m, l * l, 0.25 * s * s}) / (alpha * pi2);
    }
  }
  throw Error(Errc::spec_invariant_violation, "unknown family");
}

double verify_eigen_det(const Matrix& a, double lambda) { return det_residual(a, lambda); }

std::vector<double> symmetric_eigen_oracle(const Matrix& a) { return jacobi_eigenvalues(a); }

std::vector<double> sorted_eigenvalues(const SpectrumReport& report) {
  std::vector<double> v;
  v.reserve(report.eigenvalues.size());
  for (const auto& e : report.eigenvalues) v.push_back(e.value);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace bargain
