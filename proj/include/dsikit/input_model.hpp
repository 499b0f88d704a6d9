#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsikit/linalg.hpp"

namespace dsikit {

/// Inputs are 0-based everywhere in the library; the CLI prints 1-based labels.
struct Partition {
  std::vector<int> independent;           // pi_1, possibly empty
  std::vector<std::vector<int>> blocks;   // pi_2..pi_K, each ascending, ordered by first member
};

struct GaussianInputSpec {
  Vector mean;
  Matrix covariance;
  Partition partition;
  double psd_tolerance = 1e-10;
  // Semidefinite lower factor of the full covariance, for joint draws.
  Matrix joint_factor;

  int dim() const { return static_cast<int>(mean.size()); }
  double variance(int j) const { return covariance(j, j); }
  /// Index into partition.blocks, or -1 for an input of pi_1.
  int block_of(int j) const;
  bool has_dependent_blocks() const { return !partition.blocks.empty(); }
};

inline constexpr double kDefaultZeroThreshold = 1e-12;

/// psd_tolerance is relative: the smallest eigenvalue may not fall below
/// -psd_tolerance * (largest eigenvalue).
GaussianInputSpec build_input_spec(const Vector& mean, const Matrix& covariance,
                                   double psd_tolerance = 1e-10,
                                   double zero_threshold = kDefaultZeroThreshold);

/// Connected components of the graph |corr(i, j)| > zero_threshold.
Partition detect_blocks(const Matrix& covariance,
                        double zero_threshold = kDefaultZeroThreshold);

using Evaluator = std::function<double(std::span<const double>)>;
using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

struct ModelHandle {
  std::string name;
  int arity = 0;
  Evaluator evaluator;
  Gradient gradient;  // empty when unavailable
  // sup |dM/dx_j| per input; M_{1,k} is the max over block k.
  std::optional<std::vector<double>> partial_bounds;
  // User-supplied bound on the dependent gradient, shared by all blocks.
  std::optional<double> dependent_gradient_bound;
  std::optional<std::vector<double>> linear_coefficients;

  double operator()(std::span<const double> x) const { return evaluator(x); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
  std::optional<double> block_partial_bound(std::span<const int> block) const;
};

/// Builtins: "linear" (beta . x), "product" (prod beta_j x_j) and
/// "additive-nonlinear" (sum beta_j sin x_j). params has one entry per input.
ModelHandle register_builtin_model(std::string_view name, std::vector<double> params);

/// Extension point for models defined in host code.
ModelHandle make_model(std::string name, int arity, Evaluator evaluator,
                       Gradient gradient = {},
                       std::optional<std::vector<double>> partial_bounds = std::nullopt);

/// Largest relative discrepancy between the analytic gradient and central
/// differences (step 1e-5 relative) over n_points joint draws.
double gradient_check(const ModelHandle& model, const GaussianInputSpec& spec,
                      int n_points, std::uint64_t seed);

}  // namespace dsikit
