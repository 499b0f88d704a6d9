#include "dsikit/dependency.hpp"

#include <algorithm>
#include <cmath>

#include "dsikit/error.hpp"

namespace dsikit {
namespace {

bool same_set(std::vector<int> a, std::vector<int> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

int DependencyModel::position_of(int input) const {
  auto it = std::find(permutation.begin(), permutation.end(), input);
  return it == permutation.end() ? -1 : static_cast<int>(it - permutation.begin());
}

DependencyModel build_dm_over(const GaussianInputSpec& spec, std::span<const int> indices,
                              std::span<const int> permutation) {
  std::vector<int> block(indices.begin(), indices.end());
  std::sort(block.begin(), block.end());
  std::vector<int> perm(permutation.begin(), permutation.end());
  if (std::adjacent_find(block.begin(), block.end()) != block.end() ||
      !same_set(block, perm)) {
    throw Error(ErrorCode::kPermutationInvalid,
                "ordering is not a permutation of the block's inputs");
  }
  const int n = static_cast<int>(perm.size());
  const Matrix s = select(spec.covariance, perm, perm);
  const SemidefiniteFactor f = semidefinite_cholesky(s, kDegeneracyThreshold);

  DependencyModel dm;
  dm.block = block;
  dm.permutation = perm;
  dm.innovation_variances = s.diagonal();
  dm.degenerate_mask = f.degenerate;
  dm.mean = select(spec.mean, perm);
  dm.coeff = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    const double sd = std::sqrt(s(m, m));
    for (int l = m; l < n; ++l) dm.coeff(l, m) = f.lower(l, m) / sd;
  }
  // The first input enters identically.
  dm.coeff(0, 0) = 1.0;

  dm.innovation_functional = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    if (dm.degenerate_mask[m]) continue;
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Unit(n, m);
    for (int k = 0; k < m; ++k) row -= dm.coeff(m, k) * dm.innovation_functional.row(k);
    dm.innovation_functional.row(m) = row / dm.coeff(m, m);
  }
  return dm;
}

DependencyModel build_dm(const GaussianInputSpec& spec, std::span<const int> block,
                         std::span<const int> permutation) {
  std::vector<int> sorted(block.begin(), block.end());
  std::sort(sorted.begin(), sorted.end());
  const auto& blocks = spec.partition.blocks;
  if (std::find(blocks.begin(), blocks.end(), sorted) == blocks.end()) {
    throw Error(ErrorCode::kNotADependentBlock,
                "index set is not one of the dependent blocks of the input spec");
  }
  return build_dm_over(spec, sorted, permutation);
}

Vector dm_apply(const DependencyModel& dm, double x_first, std::span<const double> z) {
  const int n = dm.size();
  if (static_cast<int>(z.size()) != n - 1) {
    throw Error(ErrorCode::kLengthMismatch, "expected " + std::to_string(n - 1) +
                                                " innovations, got " + std::to_string(z.size()));
  }
  Vector xi(n);
  xi(0) = x_first - dm.mean(0);
  for (int m = 1; m < n; ++m) xi(m) = z[m - 1];
  return (dm.mean + dm.coeff * xi).tail(n - 1);
}

Vector innovations_of(const DependencyModel& dm, const Vector& x_perm) {
  if (x_perm.size() != dm.size()) {
    throw Error(ErrorCode::kLengthMismatch, "block realization has wrong length");
  }
  return dm.innovation_functional * (x_perm - dm.mean);
}

Vector jacobian_column(const DependencyModel& dm, std::span<const int> u, int j) {
  const int p = static_cast<int>(u.size());
  if (p >= dm.size() || dm.permutation[p] != j ||
      !same_set({u.begin(), u.end()},
                {dm.permutation.begin(), dm.permutation.begin() + p})) {
    throw Error(ErrorCode::kInconsistentPrefix,
                "conditioning set and target do not match the ordering prefix");
  }
  Vector out = Vector::Zero(dm.size());
  for (int l = 0; l < dm.size(); ++l) {
    const auto pos = std::lower_bound(dm.block.begin(), dm.block.end(), dm.permutation[l]) -
                     dm.block.begin();
    out(pos) = dm.coeff(l, p);
  }
  return out;
}

std::vector<int> prefix_permutation(std::span<const int> block, std::span<const int> u, int j) {
  std::vector<int> perm(u.begin(), u.end());
  std::sort(perm.begin(), perm.end());
  perm.push_back(j);
  for (int b : block) {
    if (b != j && std::find(u.begin(), u.end(), b) == u.end()) perm.push_back(b);
  }
  return perm;
}

ErPlan make_er_plan(const GaussianInputSpec& spec, int j, std::span<const int> u) {
  if (j < 0 || j >= spec.dim()) {
    throw Error(ErrorCode::kOutOfRange, "input index out of range");
  }
  ErPlan plan;
  plan.target = j;
  plan.conditioning.assign(u.begin(), u.end());
  std::sort(plan.conditioning.begin(), plan.conditioning.end());
  plan.position = static_cast<int>(u.size());
  plan.target_block = spec.block_of(j);
  if (plan.target_block < 0 && !u.empty()) {
    throw Error(ErrorCode::kInconsistentPrefix,
                "an input of pi_1 has no conditioning set inside a block");
  }
  const auto& blocks = spec.partition.blocks;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (static_cast<int>(k) == plan.target_block) {
      for (int v : plan.conditioning) {
        if (v == j || std::find(blocks[k].begin(), blocks[k].end(), v) == blocks[k].end()) {
          throw Error(ErrorCode::kInconsistentPrefix,
                      "conditioning set must lie in the target's block, without the target");
        }
      }
      plan.models.push_back(
          build_dm_over(spec, blocks[k], prefix_permutation(blocks[k], plan.conditioning, j)));
    } else {
      plan.models.push_back(build_dm_over(spec, blocks[k], blocks[k]));
    }
  }
  return plan;
}

double evaluate_er(const ModelHandle& model, const GaussianInputSpec& spec, const ErPlan& plan,
                   std::span<const double> x_pi1, std::span<const double> x_first_per_block,
                   std::span<const Vector> z_per_block) {
  const auto& part = spec.partition;
  if (x_pi1.size() != part.independent.size() ||
      x_first_per_block.size() != plan.models.size() ||
      z_per_block.size() != plan.models.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ER arguments do not match the partition");
  }
  std::vector<double> x(static_cast<std::size_t>(spec.dim()));
  for (std::size_t i = 0; i < x_pi1.size(); ++i) x[part.independent[i]] = x_pi1[i];
  for (std::size_t k = 0; k < plan.models.size(); ++k) {
    const DependencyModel& dm = plan.models[k];
    const Vector& z = z_per_block[k];
    const Vector rest = dm_apply(dm, x_first_per_block[k], {z.data(), static_cast<std::size_t>(z.size())});
    x[dm.permutation[0]] = x_first_per_block[k];
    for (int l = 1; l < dm.size(); ++l) x[dm.permutation[l]] = rest(l - 1);
  }
  return model(x);
}

MixDirection mix_direction(const ErPlan& plan) {
  MixDirection dir;
  if (plan.target_block < 0) {
    dir.index = {plan.target};
    dir.jac = Vector::Ones(1);
    dir.functional = Vector::Ones(1);
    return dir;
  }
  const DependencyModel& dm = plan.models[plan.target_block];
  dir.index = dm.permutation;
  dir.jac = dm.coeff.col(plan.position);
  dir.functional = dm.innovation_functional.row(plan.position).transpose();
  return dir;
}

}  // namespace dsikit
