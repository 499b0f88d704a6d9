#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dsikit/input_model.hpp"

namespace dsikit {

/// Three-input reference problem: X ~ N(0, Sigma_X) with variances (2, 8, 8),
/// M(X) = X_1 + X_2 + X_3, and ten correlation sets C1..C10.
struct CorrelationSet {
  std::string name;
  double r12 = 0.0;
  double r13 = 0.0;
  double r23 = 0.0;
};

const std::vector<CorrelationSet>& correlation_sets();
const CorrelationSet& correlation_set(const std::string& name);

Vector reference_variances();
Matrix reference_covariance(const CorrelationSet& c);
GaussianInputSpec reference_spec(const CorrelationSet& c);
ModelHandle reference_model();

/// True for sets whose covariance is singular (perfect correlation).
bool is_degenerate(const CorrelationSet& c);

/// A (u, j) pair with its closed-form Jacobian column.
struct JacobianCase {
  std::vector<int> u;
  int j = 0;
};

/// All twelve pairs (u, j) with j in {0, 1, 2} and u a subset of the other two.
const std::vector<JacobianCase>& jacobian_cases();

/// Closed-form J^(u, j) for the reference covariance, ordered by input index.
Vector closed_form_jacobian(const CorrelationSet& c, const JacobianCase& jc);

/// Random Gaussian problem with a mixed block structure, d in {3, 4, 5}.
/// Every seventh case (index % 7 == 3) gets a rank-deficient block when one
/// of size >= 3 exists.
struct RandomCase {
  GaussianInputSpec spec;
  std::vector<double> beta;
  bool rank_deficient = false;
};

RandomCase random_case(std::uint64_t seed, int index);

}  // namespace dsikit
