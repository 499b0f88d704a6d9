#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsikit/bounds.hpp"
#include "dsikit/combinatorics.hpp"
#include "dsikit/input_model.hpp"
#include "dsikit/variance.hpp"

namespace dsikit {

struct IndexEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_evals = 0;
  bool exact = false;
};

struct DsiResult {
  IndexEstimate main;
  IndexEstimate total;
};

/// Largest block handled by the subset sums behind the DSIs.
inline constexpr int kMaxBlockSize = 20;

/// DSIs of every input from one set of shared pick-freeze draws. n_evals
/// counts model runs of the pick-freeze part only (2m base runs plus m per
/// (u, j) plan); the output variance is reported separately in sigma.
struct DsiTable {
  std::vector<DsiResult> rows;
  std::uint64_t n_evals = 0;
  VarianceEstimate sigma;
  bool exact = false;
};

DsiTable dsi_all(const ModelHandle& model, const GaussianInputSpec& spec,
                 const EstimatorConfig& config);
DsiTable dsi_all(const ModelHandle& model, const GaussianInputSpec& spec,
                 const EstimatorConfig& config, const VarianceEstimate& sigma);

DsiResult dsi(const ModelHandle& model, const GaussianInputSpec& spec, int j,
              const EstimatorConfig& config);

/// Sobol' main/total indices of an input of pi_1.
DsiResult sobol(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                const EstimatorConfig& config);

/// Shapley effects over memoized conditional variances V(u). V(all inputs) is
/// the output variance passed in.
class ShapleyEngine {
 public:
  ShapleyEngine(const ModelHandle& model, const GaussianInputSpec& spec,
                const EstimatorConfig& config, VarianceEstimate sigma);

  const VarianceEstimate& conditional_variance(std::uint64_t mask);

  /// Subset-sum formula over all u not containing j.
  IndexEstimate exact(int j);
  /// Mean over n_perm uniform permutations drawn with replacement. Asking for
  /// exactly d! permutations enumerates each one once instead.
  IndexEstimate sampled(int j);

  bool enumerates_all_permutations() const;
  /// Model runs spent on V values so far, plus the output variance.
  std::uint64_t n_evals() const;
  std::size_t distinct_subsets() const { return memo_.size(); }

 private:
  const std::vector<std::vector<int>>& permutations();

  const ModelHandle& model_;
  const GaussianInputSpec& spec_;
  EstimatorConfig config_;
  VarianceEstimate sigma_;
  std::map<std::uint64_t, VarianceEstimate> memo_;
  std::vector<std::vector<int>> perms_;
};

IndexEstimate shapley_exact(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                            const EstimatorConfig& config);
IndexEstimate shapley_sampled(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                              const EstimatorConfig& config);

struct InputRow {
  int input = 0;
  int block = -1;  // index into partition.blocks, -1 for pi_1
  IndexEstimate ds;
  IndexEstimate ds_t;
  IndexEstimate sh;
  std::optional<IndexEstimate> s;
  std::optional<IndexEstimate> s_t;
  BoundRow bounds;
  std::uint64_t n_evals = 0;  // pick-freeze runs of this input's plans
};

struct IndexReport {
  std::vector<InputRow> rows;
  VarianceEstimate sigma;
  EstimatorConfig config;
  Partition partition;
  bool exact = false;
  std::string shapley_method;  // "subset-sum", "all-permutations" or "sampled"
  std::uint64_t n_evals_dsi = 0;
  std::uint64_t n_evals_shapley = 0;
  CostTable costs;
  std::optional<bool> dsi_within_cl;  // empty without dependent blocks
  bool shapley_within_cost = true;
};

IndexReport full_report(const ModelHandle& model, const GaussianInputSpec& spec,
                        const EstimatorConfig& config);

}  // namespace dsikit
