#include "bargain/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "bargain/errors.hpp"

namespace bargain {

namespace {
// Row counts below this are not worth a parallel region.
constexpr std::size_t kMatvecParallelCutoff = 256;
}  // namespace

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

double Matrix::asymmetry() const {
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

void matvec_serial(const Matrix& a, std::span<const double> x, std::span<const double> b,
                   std::span<double> out) {
  const std::size_t n = a.rows();
  const std::size_t c = a.cols();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += row[j] * x[j];
    out[i] = acc + (b.empty() ? 0.0 : b[i]);
  }
}

void matvec(const Matrix& a, std::span<const double> x, std::span<const double> b,
            std::span<double> out) {
  if (a.rows() < kMatvecParallelCutoff) {
    matvec_serial(a, x, b, out);
    return;
  }
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows());
  const std::size_t c = a.cols();
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    auto row = a.row(static_cast<std::size_t>(i));
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += row[j] * x[j];
    out[i] = acc + (b.empty() ? 0.0 : b[i]);
  }
}

namespace {

// In-place LU with partial pivoting. Returns the number of row swaps and the
// pivot list; a pivot below `tiny` stops elimination early with ok = false.
struct LuOutcome {
  bool ok = true;
  std::vector<double> pivots;
};

LuOutcome lu_factor(Matrix& a, double tiny) {
  const std::size_t n = a.rows();
  LuOutcome res;
  res.pivots.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
    const double pivot = a(k, k);
    res.pivots.push_back(pivot);
    if (std::abs(pivot) <= tiny) {
      res.ok = false;
      return res;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return res;
}

}  // namespace

std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw Error(Errc::dimension_mismatch, "solve_linear expects square A and matching b");
  if (n == 0) return {};

  const double scale = std::max(a.max_abs(), 1e-300);
  const double tiny = 64.0 * 2.220446049250313e-16 * scale * static_cast<double>(n);

  // Track row swaps so b can be permuted alongside.
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    const double pivot = a(k, k);
    if (std::abs(pivot) <= tiny)
      throw Error(Errc::singular_system, "pivot " + std::to_string(pivot) + " at column " +
                                             std::to_string(k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / pivot;
      b[i] -= f * b[k];
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  for (std::size_t ir = n; ir-- > 0;) {
    double acc = b[ir];
    for (std::size_t j = ir + 1; j < n; ++j) acc -= a(ir, j) * b[j];
    b[ir] = acc / a(ir, ir);
  }
  return b;
}

double det_residual(const Matrix& a, double lambda) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(Errc::dimension_mismatch, "det_residual expects a square matrix");
  if (n == 0) return 0.0;
  Matrix shifted = a;
  for (std::size_t i = 0; i < n; ++i) shifted(i, i) -= lambda;
  LuOutcome lu = lu_factor(shifted, 0.0);
  double det = 1.0;
  double norm = 1.0;
  for (double p : lu.pivots) {
    det *= std::abs(p);
    norm *= std::max(1.0, std::abs(p));
  }
  if (!lu.ok) return 0.0;  // exact zero pivot: lambda is an eigenvalue
  return det / norm;
}

std::vector<double> jacobi_eigenvalues(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n)
    throw Error(Errc::dimension_mismatch, "jacobi_eigenvalues expects a square matrix");
  if (input.asymmetry() > 1e-12)
    throw Error(Errc::not_symmetric,
                "asymmetry " + std::to_string(input.asymmetry()) + " exceeds 1e-12");
  Matrix a = input;
  if (n <= 1) return n == 0 ? std::vector<double>{} : std::vector<double>{a(0, 0)};

  auto off_frobenius = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  constexpr double kOffTol = 1e-13;
  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  while (off_frobenius() > kOffTol) {
    if (++sweep > kMaxSweeps)
      throw Error(Errc::not_symmetric, "Jacobi sweeps did not converge");  // unreachable in practice
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        // Smaller-magnitude rotation root keeps the sweep stable.
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t j = 0; j < n; ++j) {
          const double ap = a(p, j);
          const double aq = a(q, j);
          a(p, j) = c * ap - s * aq;
          a(q, j) = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double ip = a(i, p);
          const double iq = a(i, q);
          a(i, p) = c * ip - s * iq;
          a(i, q) = s * ip + c * iq;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

double sup_norm_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::self_loop: return "SelfLoop";
    case Errc::duplicate_edge: return "DuplicateEdge";
    case Errc::negative_pinned_value: return "NegativePinnedValue";
    case Errc::overlapping_match: return "OverlappingMatch";
    case Errc::match_not_an_edge: return "MatchNotAnEdge";
    case Errc::pinned_node_matched: return "PinnedNodeMatched";
    case Errc::zero_weight_matched_edge: return "ZeroWeightMatchedEdge";
    case Errc::unmatched_node: return "UnmatchedNode";
    case Errc::edge_not_found: return "EdgeNotFound";
    case Errc::pair_sum_violation: return "PairSumViolation";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::singular_system: return "SingularSystem";
    case Errc::not_symmetric: return "NotSymmetric";
    case Errc::insufficient_decay: return "InsufficientDecay";
    case Errc::at_fixed_point: return "AtFixedPoint";
    case Errc::horizon_too_short: return "HorizonTooShort";
    case Errc::periodic_no_convergence: return "PeriodicNoConvergence";
    case Errc::spec_invariant_violation: return "SpecInvariantViolation";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace bargain
