#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dsikit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Lower factor of a positive semidefinite matrix, computed without pivoting.
/// A column whose conditional variance falls below rel_tol * scale(m) is
/// zeroed and flagged instead of failing.
struct SemidefiniteFactor {
  Matrix lower;
  std::vector<bool> degenerate;
};

SemidefiniteFactor semidefinite_cholesky(const Matrix& s, const Vector& scale,
                                         double rel_tol = 1e-12);

/// Scale defaults to the diagonal of s.
SemidefiniteFactor semidefinite_cholesky(const Matrix& s, double rel_tol = 1e-12);

/// Moore-Penrose inverse of a symmetric matrix; eigenvalues below
/// rel_cut * (largest eigenvalue) are treated as zero.
Matrix pseudo_inverse(const Matrix& s, double rel_cut = 1e-12);

Matrix select(const Matrix& m, std::span<const int> rows, std::span<const int> cols);
Vector select(const Vector& v, std::span<const int> idx);

/// Sum in a fixed binary-tree order. Used for every reduction whose result
/// must not depend on how the terms were produced.
double pairwise_sum(std::span<const double> v);

/// Sample mean and standard error of the mean.
struct MeanError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanError mean_error(std::span<const double> v);

}  // namespace dsikit
