// Closed-form spectra for the four elementary families, the alpha-shift map
// lambda' = 1 - alpha + alpha * lambda, convergence rate/time per the
// spectral radius (or the second modulus when a conserved mode sits at 1),
// the leading-order convergence-time formulas, and two independent numerical
// eigen-oracles (Jacobi sweeps for the symmetric families, a pivoted
// determinant residual for the rest).
#pragma once

#include <vector>

#include "bargain/elementary.hpp"
#include "bargain/linalg.hpp"

namespace bargain {

enum class FamilyTag { lambda, mu, minus_one };
const char* family_tag_name(FamilyTag tag);

struct EigenvalueEntry {
  double value = 0.0;
  FamilyTag tag = FamilyTag::lambda;
  int k = 0;  // index within its family formula
};

enum class Classification {
  globally_asymptotically_stable,
  asymptotically_stable,  // limit exists but depends on the initial state
  periodic_tail,          // an eigenvalue at -1: no convergence at alpha = 1
};
const char* classification_name(Classification c);

struct SpectrumReport {
  ElementarySpec spec;
  double alpha = 1.0;
  std::vector<EigenvalueEntry> eigenvalues;
  // Path family only: row k-1 holds the orthonormal eigenvector v_k.
  Matrix eigenvectors;
  double rho = 0.0;      // spectral radius
  double lambda2 = 0.0;  // largest modulus strictly below 1
  Classification classification = Classification::globally_asymptotically_stable;
  double rate = 0.0;  // R; NaN for periodic tails, +inf for instant convergence
  double time = 0.0;  // T = 1/R
};

SpectrumReport path_spectrum(int n);
SpectrumReport cycle_spectrum(int n);
SpectrumReport blossom_spectrum(int n, int m);
SpectrumReport bicycle_spectrum(int l, int n, int m);

// Applies the affine eigenvalue map of the smoothing parameter and
// reclassifies; eigenvectors are unchanged.
SpectrumReport alpha_shift(const SpectrumReport& report, double alpha);

struct RateTime {
  double rate = 0.0;
  double time = 0.0;
};

// R and T = 1/R for a classified spectrum. Throws
// Error(periodic_no_convergence) on a periodic tail.
RateTime convergence_time(const SpectrumReport& report);

// Leading-order convergence time of the family theorems.
double asymptotic_time(const ElementarySpec& spec, double alpha);

// Normalized |det(A - lambda I)| with partial pivoting; <= 1e-8 certifies an
// eigenvalue at desk scale. Independent of the closed forms above.
double verify_eigen_det(const Matrix& a, double lambda);

// All eigenvalues of a symmetric matrix, sorted descending (Jacobi sweeps).
std::vector<double> symmetric_eigen_oracle(const Matrix& a);

std::vector<double> sorted_eigenvalues(const SpectrumReport& report);

}  // namespace bargain
