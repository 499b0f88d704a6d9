#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dsikit/dependency.hpp"
#include "dsikit/input_model.hpp"
#include "dsikit/kernels.hpp"

namespace dsikit {

enum class PathMode { kAuto, kExactOnly, kMcOnly };
enum class Exec { kSerial, kParallel };

struct EstimatorConfig {
  std::uint64_t m = 10000;     // pick-freeze pairs
  std::uint64_t n_i = 10;      // inner loop of the conditional-variance double loop
  std::uint64_t n_0 = 10000;   // outer loop
  std::uint64_t n_v = 10000;   // output-variance draws
  std::uint64_t n_perm = 500;  // sampled permutations
  std::uint64_t seed = 20240611;
  bool antithetic = false;     // output_variance only
  PathMode path = PathMode::kAuto;
  Exec exec = Exec::kParallel;

  void validate() const;
};

struct VarianceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_evals = 0;
  bool exact = false;
};

/// Output variances below this are treated as a constant model.
inline constexpr double kMinOutputVariance = 1e-14;

/// True when the closed-form linear-Gaussian path applies. Throws
/// ExactPathUnavailable if exact-only was requested for a non-linear model.
bool use_exact_path(const ModelHandle& model, const EstimatorConfig& config);

/// Throws unless the model's arity matches the input dimension.
void check_model(const ModelHandle& model, const GaussianInputSpec& spec);

VarianceEstimate output_variance(const ModelHandle& model, const GaussianInputSpec& spec,
                                 const EstimatorConfig& config);

/// V(u) = var E[M | X_u]; V(empty) = 0 and V(all) = output variance.
VarianceEstimate conditional_variance_V(const ModelHandle& model, const GaussianInputSpec& spec,
                                        std::span<const int> u, const EstimatorConfig& config);

/// Shared draws A, B for all pick-freeze quantities of one run.
struct PickFreezeBase {
  RowMatrix a;
  RowMatrix b;
  std::vector<double> ga;
  std::vector<double> gb;
  double centre = 0.0;  // mean of ga and gb together
};

PickFreezeBase pick_freeze_base(const ModelHandle& model, const GaussianInputSpec& spec,
                                const EstimatorConfig& config);

/// Per-sample terms whose means are sigma^fo and sigma^tot for one plan.
struct PlanTerms {
  std::vector<double> first_order;
  std::vector<double> total;
};

PlanTerms plan_terms(const ModelHandle& model, const PickFreezeBase& base, const MixDirection& dir,
                     const EstimatorConfig& config);

/// Closed-form (beta . J)^2 sigma_j^2 for a linear model.
double linear_plan_variance(const ModelHandle& model, const GaussianInputSpec& spec,
                            const ErPlan& plan);

struct SfVariances {
  VarianceEstimate first_order;
  VarianceEstimate total;
};

SfVariances sf_variances(const ModelHandle& model, const GaussianInputSpec& spec,
                         const ErPlan& plan, const EstimatorConfig& config);

struct GsiTotal {
  double gsi_t = 0.0;
  double trace_var = 0.0;
};

/// Closed form for the Gaussian dependency model.
GsiTotal gsi_total_of_dm(const DependencyModel& dm, std::span<const int> u, int j);

/// Pick-freeze estimate of the same index, for cross-checking.
VarianceEstimate gsi_total_mc(const DependencyModel& dm, std::span<const int> u, int j,
                              const EstimatorConfig& config);

std::uint64_t subset_mask(std::span<const int> u);

}  // namespace dsikit
