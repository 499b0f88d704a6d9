#include "dsikit/linalg.hpp"

#include <cmath>

namespace dsikit {

SemidefiniteFactor semidefinite_cholesky(const Matrix& s, const Vector& scale,
                                         double rel_tol) {
  const Eigen::Index n = s.rows();
  SemidefiniteFactor f;
  f.lower = Matrix::Zero(n, n);
  f.degenerate.assign(static_cast<std::size_t>(n), false);
  for (Eigen::Index m = 0; m < n; ++m) {
    double c = s(m, m);
    for (Eigen::Index k = 0; k < m; ++k) c -= f.lower(m, k) * f.lower(m, k);
    if (!(c > rel_tol * scale(m)) || c <= 0.0) {
      f.degenerate[static_cast<std::size_t>(m)] = true;
      continue;
    }
    const double piv = std::sqrt(c);
    f.lower(m, m) = piv;
    for (Eigen::Index i = m + 1; i < n; ++i) {
      double v = s(i, m);
      for (Eigen::Index k = 0; k < m; ++k) v -= f.lower(i, k) * f.lower(m, k);
      f.lower(i, m) = v / piv;
    }
  }
  return f;
}

SemidefiniteFactor semidefinite_cholesky(const Matrix& s, double rel_tol) {
  return semidefinite_cholesky(s, s.diagonal(), rel_tol);
}

Matrix pseudo_inverse(const Matrix& s, double rel_cut) {
  if (s.size() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const Vector& lam = eig.eigenvalues();
  const double cut = rel_cut * std::max(lam.maxCoeff(), 0.0);
  Vector inv = Vector::Zero(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) > cut && lam(i) > 0.0) inv(i) = 1.0 / lam(i);
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

Matrix select(const Matrix& m, std::span<const int> rows, std::span<const int> cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    }
  }
  return out;
}

Vector select(const Vector& v, std::span<const int> idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(idx[i]);
  return out;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

MeanError mean_error(std::span<const double> v) {
  MeanError r;
  const auto n = static_cast<double>(v.size());
  if (v.empty()) return r;
  r.mean = pairwise_sum(v) / n;
  if (v.size() < 2) return r;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - r.mean) * (v[i] - r.mean);
  r.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  return r;
}

}  // namespace dsikit
