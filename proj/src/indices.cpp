#include "dsikit/indices.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "dsikit/dependency.hpp"
#include "dsikit/error.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {
namespace {

// ratio = num / sigma with independent errors on both.
IndexEstimate ratio(const MeanError& num, const VarianceEstimate& sigma) {
  IndexEstimate e;
  e.value = num.mean / sigma.value;
  const double a = num.std_error / sigma.value;
  const double b = num.mean * sigma.std_error / (sigma.value * sigma.value);
  e.std_error = std::sqrt(a * a + b * b);
  return e;
}

std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  for (int j = 0; mask != 0; ++j, mask >>= 1) {
    if (mask & 1U) out.push_back(j);
  }
  return out;
}

const std::vector<int>* block_members(const GaussianInputSpec& spec, int j) {
  const int k = spec.block_of(j);
  return k < 0 ? nullptr : &spec.partition.blocks[static_cast<std::size_t>(k)];
}

}  // namespace

DsiTable dsi_all(const ModelHandle& model, const GaussianInputSpec& spec,
                 const EstimatorConfig& config) {
  return dsi_all(model, spec, config, output_variance(model, spec, config));
}

DsiTable dsi_all(const ModelHandle& model, const GaussianInputSpec& spec,
                 const EstimatorConfig& config, const VarianceEstimate& sigma) {
  check_model(model, spec);
  config.validate();
  for (const auto& b : spec.partition.blocks) {
    if (static_cast<int>(b.size()) > kMaxBlockSize) {
      throw Error(ErrorCode::kBlockTooLarge, "dependent block of size " +
                                                 std::to_string(b.size()) + " exceeds " +
                                                 std::to_string(kMaxBlockSize));
    }
  }
  const int d = spec.dim();
  DsiTable table;
  table.sigma = sigma;
  table.exact = use_exact_path(model, config) && sigma.exact;
  table.rows.resize(static_cast<std::size_t>(d));

  // Plans of input j: all u in its block without j, or just the empty set in pi_1.
  auto plans_of = [&](int j) {
    const auto* block = block_members(spec, j);
    if (block == nullptr) return std::vector<std::vector<int>>{{}};
    return subsets_excluding(*block, j);
  };
  auto block_size = [&](int j) {
    const auto* block = block_members(spec, j);
    return block == nullptr ? 1 : static_cast<int>(block->size());
  };

  if (table.exact) {
    for (int j = 0; j < d; ++j) {
      const int dk = block_size(j);
      double sum = 0.0;
      for (const auto& u : plans_of(j)) {
        const double w = 1.0 / static_cast<double>(binomial(static_cast<unsigned>(dk - 1),
                                                            static_cast<unsigned>(u.size())));
        sum += w * linear_plan_variance(model, spec, make_er_plan(spec, j, u));
      }
      const double v = sum / (dk * sigma.value);
      table.rows[j].main = {v, 0.0, 0, true};
      table.rows[j].total = {v, 0.0, 0, true};
    }
    return table;
  }

  const PickFreezeBase base = pick_freeze_base(model, spec, config);
  table.n_evals = 2 * config.m;
  const std::size_t m = base.ga.size();
  for (int j = 0; j < d; ++j) {
    const int dk = block_size(j);
    std::vector<double> fo(m, 0.0), tot(m, 0.0);
    std::uint64_t evals = 0;
    for (const auto& u : plans_of(j)) {
      const double w = 1.0 / static_cast<double>(binomial(static_cast<unsigned>(dk - 1),
                                                          static_cast<unsigned>(u.size())));
      const PlanTerms t =
          plan_terms(model, base, mix_direction(make_er_plan(spec, j, u)), config);
      for (std::size_t i = 0; i < m; ++i) {
        fo[i] += w * t.first_order[i] / dk;
        tot[i] += w * t.total[i] / dk;
      }
      evals += config.m;
    }
    table.n_evals += evals;
    DsiResult& r = table.rows[j];
    r.main = ratio(mean_error(fo), sigma);
    r.total = ratio(mean_error(tot), sigma);
    r.main.n_evals = r.total.n_evals = evals;
  }
  return table;
}

DsiResult dsi(const ModelHandle& model, const GaussianInputSpec& spec, int j,
              const EstimatorConfig& config) {
  if (j < 0 || j >= spec.dim()) throw Error(ErrorCode::kOutOfRange, "input index out of range");
  return dsi_all(model, spec, config).rows[static_cast<std::size_t>(j)];
}

DsiResult sobol(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                const EstimatorConfig& config) {
  if (j < 0 || j >= spec.dim()) throw Error(ErrorCode::kOutOfRange, "input index out of range");
  if (spec.block_of(j) >= 0) {
    throw Error(ErrorCode::kNotIndependentInput,
                "input " + std::to_string(j + 1) + " sits in a dependent block");
  }
  // For an input of pi_1 the single plan resamples X_j itself, which is the
  // plain pick-freeze / Jansen pair on M.
  return dsi(model, spec, j, config);
}

ShapleyEngine::ShapleyEngine(const ModelHandle& model, const GaussianInputSpec& spec,
                             const EstimatorConfig& config, VarianceEstimate sigma)
    : model_(model), spec_(spec), config_(config), sigma_(sigma) {
  check_model(model, spec);
  config.validate();
  if (spec.dim() > 63) {
    throw Error(ErrorCode::kDimensionTooLargeForExact, "Shapley effects support d <= 63");
  }
}

const VarianceEstimate& ShapleyEngine::conditional_variance(std::uint64_t mask) {
  static const VarianceEstimate kZero{0.0, 0.0, 0, true};
  const std::uint64_t full = (std::uint64_t{1} << spec_.dim()) - 1;
  if (mask == 0) return kZero;
  if (mask == full) return sigma_;
  auto it = memo_.find(mask);
  if (it == memo_.end()) {
    it = memo_.emplace(mask, conditional_variance_V(model_, spec_, mask_members(mask), config_))
             .first;
  }
  return it->second;
}

std::uint64_t ShapleyEngine::n_evals() const {
  std::uint64_t n = sigma_.n_evals;
  for (const auto& [mask, v] : memo_) n += v.n_evals;
  return n;
}

IndexEstimate ShapleyEngine::exact(int j) {
  const int d = spec_.dim();
  if (d > kMaxSubsetGround) {
    throw Error(ErrorCode::kDimensionTooLargeForExact,
                "subset enumeration needs d <= " + std::to_string(kMaxSubsetGround));
  }
  const std::uint64_t full = (std::uint64_t{1} << d) - 1;
  const std::uint64_t bit = std::uint64_t{1} << j;
  std::map<std::uint64_t, double> coef;
  double num = 0.0;
  for (std::uint64_t mask = 0; mask <= full; ++mask) {
    if (mask & bit) continue;
    const int s = std::popcount(mask);
    const double w = 1.0 / (d * static_cast<double>(binomial(static_cast<unsigned>(d - 1),
                                                             static_cast<unsigned>(s))));
    num += w * (conditional_variance(mask | bit).value - conditional_variance(mask).value);
    coef[mask | bit] += w;
    coef[mask] -= w;
  }
  // Sh_j = c_full + sum_{v != full} c_v V(v) / Sigma, with V(v) independent of Sigma.
  double var = 0.0;
  double rest = 0.0;
  bool exact = sigma_.exact;
  for (const auto& [mask, c] : coef) {
    if (mask == 0 || mask == full) continue;
    const VarianceEstimate& v = conditional_variance(mask);
    var += c * c * v.std_error * v.std_error;
    rest += c * v.value;
    exact = exact && v.exact;
  }
  IndexEstimate e;
  e.value = num / sigma_.value;
  const double s2 = sigma_.value * sigma_.value;
  e.std_error = std::sqrt(var / s2 + rest * rest * sigma_.std_error * sigma_.std_error / (s2 * s2));
  e.exact = exact;
  e.n_evals = n_evals();
  return e;
}

bool ShapleyEngine::enumerates_all_permutations() const {
  const int d = spec_.dim();
  return d <= 20 && factorial(static_cast<unsigned>(d)) == Count(config_.n_perm);
}

const std::vector<std::vector<int>>& ShapleyEngine::permutations() {
  if (!perms_.empty()) return perms_;
  const int d = spec_.dim();
  std::vector<int> p(static_cast<std::size_t>(d));
  std::iota(p.begin(), p.end(), 0);
  if (enumerates_all_permutations()) {
    do {
      perms_.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return perms_;
  }
  const StreamKey key = stream_key(config_.seed, "shapley-permutations");
  perms_.reserve(static_cast<std::size_t>(config_.n_perm));
  for (std::uint64_t i = 0; i < config_.n_perm; ++i) {
    std::iota(p.begin(), p.end(), 0);
    UniformStream us(key, i);
    for (int k = d - 1; k > 0; --k) {
      const int r = std::min(k, static_cast<int>(us.next() * (k + 1)));
      std::swap(p[k], p[r]);
    }
    perms_.push_back(p);
  }
  return perms_;
}

IndexEstimate ShapleyEngine::sampled(int j) {
  const bool all = enumerates_all_permutations();
  const auto& perms = permutations();
  std::vector<double> delta;
  delta.reserve(perms.size());
  bool exact = sigma_.exact;
  for (const auto& p : perms) {
    std::uint64_t pred = 0;
    for (int v : p) {
      if (v == j) break;
      pred |= std::uint64_t{1} << v;
    }
    const VarianceEstimate& hi = conditional_variance(pred | (std::uint64_t{1} << j));
    const VarianceEstimate& lo = conditional_variance(pred);
    exact = exact && hi.exact && lo.exact;
    delta.push_back(hi.value - lo.value);
  }
  const MeanError me = mean_error(delta);
  IndexEstimate e;
  e.value = me.mean / sigma_.value;
  e.std_error = all ? 0.0 : me.std_error / sigma_.value;
  e.exact = exact;
  e.n_evals = n_evals();
  return e;
}

IndexEstimate shapley_exact(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                            const EstimatorConfig& config) {
  if (j < 0 || j >= spec.dim()) throw Error(ErrorCode::kOutOfRange, "input index out of range");
  if (spec.dim() > kMaxSubsetGround) {
    throw Error(ErrorCode::kDimensionTooLargeForExact,
                "subset enumeration needs d <= " + std::to_string(kMaxSubsetGround));
  }
  ShapleyEngine eng(model, spec, config, output_variance(model, spec, config));
  return eng.exact(j);
}

IndexEstimate shapley_sampled(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                              const EstimatorConfig& config) {
  if (j < 0 || j >= spec.dim()) throw Error(ErrorCode::kOutOfRange, "input index out of range");
  ShapleyEngine eng(model, spec, config, output_variance(model, spec, config));
  return eng.sampled(j);
}

IndexReport full_report(const ModelHandle& model, const GaussianInputSpec& spec,
                        const EstimatorConfig& config) {
  check_model(model, spec);
  config.validate();
  const int d = spec.dim();
  IndexReport rep;
  rep.config = config;
  rep.partition = spec.partition;
  rep.sigma = output_variance(model, spec, config);
  const DsiTable dt = dsi_all(model, spec, config, rep.sigma);
  rep.exact = dt.exact;
  rep.n_evals_dsi = dt.n_evals;

  ShapleyEngine eng(model, spec, config, rep.sigma);
  bool subset_sum = false;
  if (rep.exact) {
    subset_sum = d <= 16;
  } else {
    subset_sum = d <= kMaxSubsetGround &&
                 (std::uint64_t{1} << d) - 2 <= config.n_perm * static_cast<std::uint64_t>(d - 1);
  }
  rep.shapley_method = subset_sum ? "subset-sum"
                       : eng.enumerates_all_permutations() ? "all-permutations"
                                                           : "sampled";

  const std::vector<BoundRow> bounds = bound_report(model, spec, config, rep.sigma.value);
  for (int j = 0; j < d; ++j) {
    InputRow row;
    row.input = j;
    row.block = spec.block_of(j);
    row.ds = dt.rows[j].main;
    row.ds_t = dt.rows[j].total;
    row.sh = subset_sum ? eng.exact(j) : eng.sampled(j);
    if (row.block < 0) {
      row.s = row.ds;
      row.s_t = row.ds_t;
    }
    row.bounds = bounds[j];
    row.n_evals = row.ds.n_evals;
    rep.rows.push_back(row);
  }
  rep.n_evals_shapley = eng.n_evals();

  std::vector<int> sizes;
  for (const auto& b : spec.partition.blocks) sizes.push_back(static_cast<int>(b.size()));
  rep.costs = cost_table(d, sizes, config.m, config.n_i, config.n_0, config.n_v, config.n_perm);
  if (rep.costs.d_max > 0) rep.dsi_within_cl = Count(rep.n_evals_dsi) <= rep.costs.c_l;
  rep.shapley_within_cost =
      Count(rep.n_evals_shapley) <= (subset_sum ? rep.costs.c : rep.costs.c_prime);
  return rep;
}

}  // namespace dsikit
