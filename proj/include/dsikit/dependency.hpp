#pragma once

#include <span>
#include <vector>

#include "dsikit/input_model.hpp"

namespace dsikit {

/// Gaussian dependency model of one block for a given ordering w of its
/// inputs: X_{w_l} = mu_{w_l} + sum_{m <= l} coeff(l, m) * xi_m, with
/// xi_1 = X_{w_1} - mu_{w_1} and xi_m = Z_{w_m} ~ N(0, sigma^2_{w_m}).
struct DependencyModel {
  std::vector<int> block;        // ascending
  std::vector<int> permutation;  // w_1..w_{d_k}
  Matrix coeff;                  // lower triangular, in permutation order
  Vector innovation_variances;   // sigma^2_{w_m}
  std::vector<bool> degenerate_mask;
  // Row m maps the centered block (permutation order) to xi_m. Zero on
  // degenerate rows.
  Matrix innovation_functional;
  Vector mean;  // block means, permutation order

  int size() const { return static_cast<int>(permutation.size()); }
  int position_of(int input) const;
};

/// Conditional variances below this fraction of the marginal variance drop
/// the innovation.
inline constexpr double kDegeneracyThreshold = 1e-12;

/// `block` must be one of the dependent blocks detected in spec.
DependencyModel build_dm(const GaussianInputSpec& spec, std::span<const int> block,
                         std::span<const int> permutation);

/// Same construction over an arbitrary index set, without requiring it to be a
/// detected block.
DependencyModel build_dm_over(const GaussianInputSpec& spec, std::span<const int> indices,
                              std::span<const int> permutation);

/// X_{w_2..w_{d_k}} from X_{w_1} and the innovations Z_{w_2..w_{d_k}}.
Vector dm_apply(const DependencyModel& dm, double x_first, std::span<const double> z);

/// Inverse direction: xi (permutation order) from a block realization given in
/// permutation order.
Vector innovations_of(const DependencyModel& dm, const Vector& x_perm);

/// J^(u, j): d X_block / d Z_j, ordered like dm.block. u must be the first |u|
/// entries of the permutation and j the next one.
Vector jacobian_column(const DependencyModel& dm, std::span<const int> u, int j);

/// Equivalent representation for target j conditioned on u within its block.
/// Other blocks keep ascending order.
struct ErPlan {
  std::vector<DependencyModel> models;  // one per dependent block
  int target = 0;
  std::vector<int> conditioning;        // u, ascending
  int target_block = -1;                // -1 when target is in pi_1
  int position = 0;                     // 0-based position of target = |u|
};

ErPlan make_er_plan(const GaussianInputSpec& spec, int j, std::span<const int> u);

/// Ordering (u ascending, j, remaining ascending).
std::vector<int> prefix_permutation(std::span<const int> block, std::span<const int> u, int j);

double evaluate_er(const ModelHandle& model, const GaussianInputSpec& spec, const ErPlan& plan,
                   std::span<const double> x_pi1, std::span<const double> x_first_per_block,
                   std::span<const Vector> z_per_block);

/// Resampling direction of the plan's target innovation: moving xi_p by t
/// moves X_index by jac * t, and xi_p = functional . (X_index - mu).
struct MixDirection {
  std::vector<int> index;
  Vector jac;
  Vector functional;
};

MixDirection mix_direction(const ErPlan& plan);

}  // namespace dsikit
