// Small dense linear algebra: row-major matrices, OpenMP mat-vec kernel with
// a serial reference, Gaussian elimination with partial pivoting, and a
// cyclic-Jacobi symmetric eigensolver. Everything here targets desk-scale
// dimensions (a few hundred at most), so dense storage is deliberate.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace bargain {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const { return {a_.data() + i * cols_, cols_}; }
  std::span<double> row(std::size_t i) { return {a_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return a_; }

  double max_abs() const;
  // max_ij |A_ij - A_ji|; 0 for empty matrices.
  double asymmetry() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

// out = A x + b. Parallel over rows; each row is a sequential dot product, so
// results are bit-identical to matvec_serial for any thread count.
void matvec(const Matrix& a, std::span<const double> x, std::span<const double> b,
            std::span<double> out);

// Serial reference for the kernel above, kept for tests and benchmarks.
void matvec_serial(const Matrix& a, std::span<const double> x, std::span<const double> b,
                   std::span<double> out);

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws Error(singular_system) on a vanishing pivot.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

// Normalized determinant residual |det(A - lambda I)| / prod max(1, |pivot|),
// computed via elimination with partial pivoting. Values <= 1e-8 certify
// lambda as an eigenvalue at desk scale.
double det_residual(const Matrix& a, double lambda);

// All eigenvalues of a symmetric matrix via row-cyclic Jacobi rotation
// sweeps, iterated until the off-diagonal Frobenius norm is <= 1e-13.
// Returned sorted descending. Throws Error(not_symmetric) if the input is
// asymmetric beyond 1e-12.
std::vector<double> jacobi_eigenvalues(const Matrix& a);

double sup_norm_diff(std::span<const double> a, std::span<const double> b);

}  // namespace bargain
