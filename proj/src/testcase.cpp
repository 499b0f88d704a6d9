#include "dsikit/testcase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dsikit/error.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {

const std::vector<CorrelationSet>& correlation_sets() {
  static const std::vector<CorrelationSet> sets = {
      {"C1", 1.0, 1.0, 1.0},      {"C2", 0.25, 0.5, 0.75},  {"C3", 0.01, 0.0, 0.75},
      {"C4", 0.5, 0.5, 0.5},      {"C5", -0.5, 0.5, -0.5},  {"C6", 0.0, 0.6, 0.0},
      {"C7", 0.0, 0.0, 0.0},      {"C8", 0.25, 0.8, 0.5},   {"C9", 0.0, 0.75, 0.45},
      {"C10", -0.25, 0.25, 0.25},
  };
  return sets;
}

const CorrelationSet& correlation_set(const std::string& name) {
  for (const auto& c : correlation_sets()) {
    if (c.name == name) return c;
  }
  throw Error(ErrorCode::kOutOfRange, "no correlation set named " + name);
}

Vector reference_variances() { return Vector{{2.0, 8.0, 8.0}}; }

Matrix reference_covariance(const CorrelationSet& c) {
  const Vector sd = reference_variances().cwiseSqrt();
  Matrix corr{{1.0, c.r12, c.r13}, {c.r12, 1.0, c.r23}, {c.r13, c.r23, 1.0}};
  Matrix cov = sd.asDiagonal() * corr * sd.asDiagonal();
  cov.diagonal() = reference_variances();
  return cov;
}

GaussianInputSpec reference_spec(const CorrelationSet& c) {
  return build_input_spec(Vector::Zero(3), reference_covariance(c));
}

ModelHandle reference_model() { return register_builtin_model("linear", {1.0, 1.0, 1.0}); }

bool is_degenerate(const CorrelationSet& c) {
  const double det = 1.0 - c.r12 * c.r12 - c.r13 * c.r13 - c.r23 * c.r23 +
                     2.0 * c.r12 * c.r13 * c.r23;
  return det < 1e-12;
}

const std::vector<JacobianCase>& jacobian_cases() {
  static const std::vector<JacobianCase> cases = {
      {{}, 0},  {{}, 1},  {{}, 2},  {{0}, 1},    {{0}, 2},    {{1}, 0},
      {{1}, 2}, {{2}, 0}, {{2}, 1}, {{0, 1}, 2}, {{0, 2}, 1}, {{1, 2}, 0},
  };
  return cases;
}

Vector closed_form_jacobian(const CorrelationSet& c, const JacobianCase& jc) {
  const Vector sd = reference_variances().cwiseSqrt();
  const double s1 = sd(0), s2 = sd(1), s3 = sd(2);
  const double r12 = c.r12, r13 = c.r13, r23 = c.r23;
  const double det = 1.0 - r12 * r12 - r13 * r13 - r23 * r23 + 2.0 * r12 * r13 * r23;
  const double q12 = std::sqrt(1.0 - r12 * r12);
  const double q13 = std::sqrt(1.0 - r13 * r13);
  const double q23 = std::sqrt(1.0 - r23 * r23);
  const auto& u = jc.u;
  if (u.empty()) {
    switch (jc.j) {
      case 0: return Vector{{1.0, r12 * s2 / s1, r13 * s3 / s1}};
      case 1: return Vector{{r12 * s1 / s2, 1.0, r23 * s3 / s2}};
      default: return Vector{{r13 * s1 / s3, r23 * s2 / s3, 1.0}};
    }
  }
  if (u.size() == 1) {
    const int a = u[0], j = jc.j;
    if (a == 0 && j == 1) return Vector{{0.0, q12, s3 * (r23 - r12 * r13) / (s2 * q12)}};
    if (a == 0 && j == 2) return Vector{{0.0, s2 * (r23 - r12 * r13) / (s3 * q13), q13}};
    if (a == 1 && j == 0) return Vector{{q12, 0.0, s3 * (r13 - r12 * r23) / (s1 * q12)}};
    if (a == 1 && j == 2) return Vector{{s1 * (r13 - r12 * r23) / (s3 * q23), 0.0, q23}};
    if (a == 2 && j == 0) return Vector{{q13, s2 * (r12 - r13 * r23) / (s1 * q13), 0.0}};
    if (a == 2 && j == 1) return Vector{{s1 * (r12 - r13 * r23) / (s2 * q23), q23, 0.0}};
  }
  if (u.size() == 2) {
    if (jc.j == 2) return Vector{{0.0, 0.0, std::sqrt(det / (1.0 - r12 * r12))}};
    if (jc.j == 1) return Vector{{0.0, std::sqrt(det / (1.0 - r13 * r13)), 0.0}};
    if (jc.j == 0) return Vector{{std::sqrt(det / (1.0 - r23 * r23)), 0.0, 0.0}};
  }
  throw Error(ErrorCode::kOutOfRange, "not one of the twelve reference (u, j) pairs");
}

RandomCase random_case(std::uint64_t seed, int index) {
  const StreamKey key = stream_key(seed, "random-case", static_cast<std::uint64_t>(index));
  UniformStream uni(key, 0);
  NormalStream nor(key, 1);
  const int d = 3 + index % 3;

  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  for (int k = d - 1; k > 0; --k) {
    std::swap(order[k], order[std::min(k, static_cast<int>(uni.next() * (k + 1)))]);
  }
  // Random composition of d; force at least one group of size >= 2.
  std::vector<int> sizes;
  int left = d;
  while (left > 0) {
    const int s = 1 + std::min(left - 1, static_cast<int>(uni.next() * left));
    sizes.push_back(s);
    left -= s;
  }
  if (*std::max_element(sizes.begin(), sizes.end()) < 2) {
    sizes.assign({2});
    for (int i = 2; i < d; ++i) sizes.push_back(1);
  }

  RandomCase rc;
  Matrix cov = Matrix::Zero(d, d);
  std::size_t pos = 0;
  const bool want_deficient = index % 7 == 3;
  for (int s : sizes) {
    std::vector<int> members(order.begin() + static_cast<long>(pos),
                             order.begin() + static_cast<long>(pos + s));
    pos += static_cast<std::size_t>(s);
    Matrix block;
    if (s == 1) {
      block = Matrix::Ones(1, 1);
    } else {
      const bool deficient = want_deficient && !rc.rank_deficient && s >= 3;
      const int cols = deficient ? s - 1 : s;
      Matrix a(s, cols);
      for (int i = 0; i < s; ++i) {
        for (int k = 0; k < cols; ++k) a(i, k) = nor.next();
      }
      block = a * a.transpose();
      if (!deficient) block += 0.2 * Matrix::Identity(s, s);
      rc.rank_deficient = rc.rank_deficient || deficient;
    }
    Vector sd(s);
    for (int i = 0; i < s; ++i) sd(i) = (0.5 + 2.0 * uni.next()) / std::sqrt(block(i, i));
    block = sd.asDiagonal() * block * sd.asDiagonal();
    for (int i = 0; i < s; ++i) {
      for (int k = 0; k < s; ++k) cov(members[i], members[k]) = block(i, k);
    }
  }
  Vector mean(d);
  for (int i = 0; i < d; ++i) mean(i) = 0.5 * nor.next();
  rc.beta.resize(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double mag = 0.5 + 1.5 * uni.next();
    rc.beta[i] = uni.next() < 0.5 ? -mag : mag;
  }
  rc.spec = build_input_spec(mean, cov);
  return rc;
}

}  // namespace dsikit
