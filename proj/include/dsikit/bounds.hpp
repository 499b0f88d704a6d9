#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsikit/input_model.hpp"
#include "dsikit/variance.hpp"

namespace dsikit {

/// E_j for a Gaussian innovation of variance sigma2: sigma2 * e_std().
double ej_factor(double sigma2);

/// A derivative-based bound. For the E-factor bounds, value = coefficient *
/// e_std() with the convention 0 * inf = 0, so `coefficient` keeps the finite
/// part of the bound.
struct BoundValue {
  double value = 0.0;
  double coefficient = 0.0;
  bool uses_e_factor = false;
  bool heuristic = false;  // derivative bound came from sampling
  std::string path;        // "linear", "general", "mc", "gsi"
};

/// Bound for an input of pi_1.
BoundValue dub_independent(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                           const EstimatorConfig& config);
BoundValue dub_independent(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                           const EstimatorConfig& config, double sigma);

/// Finite parts of the two E-factor forms of the dependent-input bound, over
/// the orderings of `indices` (normally j's block).
struct DubCoefficients {
  double general = 0.0;            // uses the partial-derivative bound M_{1,k}
  std::optional<double> linear;    // uses sum of beta^2 outside u; linear models only
  double partial_bound = 0.0;      // M_{1,k} actually used
  bool heuristic = false;
};

DubCoefficients dub_coefficients(const ModelHandle& model, const GaussianInputSpec& spec,
                                 std::span<const int> indices, int j, double sigma,
                                 const EstimatorConfig& config);

BoundValue dub(const ModelHandle& model, const GaussianInputSpec& spec, int j,
               const EstimatorConfig& config);
BoundValue dub(const ModelHandle& model, const GaussianInputSpec& spec, int j,
               const EstimatorConfig& config, double sigma);

/// Dependent-gradient bound M^d_{1,k} for block `indices`: user value, else the
/// linear slope bound max |beta . J| / |J| over all orderings, else the norm of
/// the per-input partial bounds.
std::optional<double> dependent_gradient_bound(const ModelHandle& model,
                                               const GaussianInputSpec& spec,
                                               std::span<const int> indices);

BoundValue dub_prime(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                     const EstimatorConfig& config);
BoundValue dub_prime(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                     const EstimatorConfig& config, double sigma);

/// max |dM/dx_l| over `block` and 10^4 joint draws, times 1.1. Not a
/// certified supremum.
double sampled_partial_bound(const ModelHandle& model, const GaussianInputSpec& spec,
                             std::span<const int> block, const EstimatorConfig& config);

struct BoundRow {
  int input = 0;
  BoundValue dub;
  std::optional<BoundValue> dub_prime;
  double min_bound = 0.0;
};

std::vector<BoundRow> bound_report(const ModelHandle& model, const GaussianInputSpec& spec,
                                   const EstimatorConfig& config, double sigma);

}  // namespace dsikit
