#include "dsikit/variance.hpp"

#include <algorithm>
#include <cmath>

#include "dsikit/error.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {
namespace {

void sample_joint(const EstimatorConfig& c, const GaussianInputSpec& spec, StreamKey key,
                  bool antithetic, RowMatrix& out) {
  if (c.exec == Exec::kSerial) {
    kernels::serial::sample_joint(spec, key, antithetic, out);
  } else {
    kernels::omp::sample_joint(spec, key, antithetic, out);
  }
}

void evaluate(const EstimatorConfig& c, const ModelHandle& model, const RowMatrix& x,
              std::span<double> y) {
  if (c.exec == Exec::kSerial) {
    kernels::serial::evaluate(model, x, y);
  } else {
    kernels::omp::evaluate(model, x, y);
  }
}

double linear_variance(const std::vector<double>& beta, const Matrix& cov) {
  const Eigen::Map<const Vector> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
  return b.dot(cov * b);
}

}  // namespace

void EstimatorConfig::validate() const {
  if (m < 2 || n_i < 2 || n_0 < 2 || n_v < 2) {
    throw Error(ErrorCode::kInvalidConfig, "sample sizes m, N_i, N_0 and N_v must be >= 2");
  }
  if (n_perm < 1) throw Error(ErrorCode::kInvalidConfig, "n_perm must be >= 1");
  if (antithetic && n_v % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig, "antithetic sampling needs an even N_v");
  }
}

bool use_exact_path(const ModelHandle& model, const EstimatorConfig& config) {
  const bool linear = model.linear_coefficients.has_value();
  if (config.path == PathMode::kExactOnly && !linear) {
    throw Error(ErrorCode::kExactPathUnavailable,
                "exact-only requested but model '" + model.name + "' is not linear");
  }
  return linear && config.path != PathMode::kMcOnly;
}

void check_model(const ModelHandle& model, const GaussianInputSpec& spec) {
  if (model.arity != spec.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "model '" + model.name + "' takes " + std::to_string(model.arity) +
                    " inputs but the input spec has " + std::to_string(spec.dim()));
  }
}

std::uint64_t subset_mask(std::span<const int> u) {
  std::uint64_t mask = 0;
  for (int j : u) mask |= std::uint64_t{1} << j;
  return mask;
}

VarianceEstimate output_variance(const ModelHandle& model, const GaussianInputSpec& spec,
                                 const EstimatorConfig& config) {
  check_model(model, spec);
  config.validate();
  VarianceEstimate est;
  if (use_exact_path(model, config)) {
    est.value = linear_variance(*model.linear_coefficients, spec.covariance);
    est.exact = true;
  } else {
    const auto n = static_cast<Eigen::Index>(config.n_v);
    RowMatrix x(n, spec.dim());
    sample_joint(config, spec, stream_key(config.seed, "output-variance"), config.antithetic, x);
    std::vector<double> y(static_cast<std::size_t>(n));
    evaluate(config, model, x, y);
    const double mean = pairwise_sum(y) / static_cast<double>(n);
    const double bessel = static_cast<double>(n) / static_cast<double>(n - 1);
    std::vector<double> dev(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) dev[i] = (y[i] - mean) * (y[i] - mean) * bessel;
    if (config.antithetic) {
      // Pairs are dependent; the pair averages are not.
      std::vector<double> pairs(dev.size() / 2);
      for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = 0.5 * (dev[2 * i] + dev[2 * i + 1]);
      const MeanError me = mean_error(pairs);
      est.value = me.mean;
      est.std_error = me.std_error;
    } else {
      const MeanError me = mean_error(dev);
      est.value = me.mean;
      est.std_error = me.std_error;
    }
    est.n_evals = config.n_v;
  }
  if (!(est.value >= kMinOutputVariance)) {
    throw Error(ErrorCode::kDegenerateVariance,
                "output variance " + std::to_string(est.value) + " is below 1e-14");
  }
  return est;
}

VarianceEstimate conditional_variance_V(const ModelHandle& model, const GaussianInputSpec& spec,
                                        std::span<const int> u, const EstimatorConfig& config) {
  check_model(model, spec);
  config.validate();
  std::vector<int> cond(u.begin(), u.end());
  std::sort(cond.begin(), cond.end());
  cond.erase(std::unique(cond.begin(), cond.end()), cond.end());
  for (int j : cond) {
    if (j < 0 || j >= spec.dim()) throw Error(ErrorCode::kOutOfRange, "input index out of range");
  }
  if (cond.empty()) {
    VarianceEstimate zero;
    zero.exact = true;
    return zero;
  }
  if (static_cast<int>(cond.size()) == spec.dim()) return output_variance(model, spec, config);

  VarianceEstimate est;
  if (use_exact_path(model, config)) {
    const auto& beta = *model.linear_coefficients;
    const Eigen::Map<const Vector> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
    Vector w(static_cast<Eigen::Index>(cond.size()));
    for (std::size_t k = 0; k < cond.size(); ++k) {
      w(static_cast<Eigen::Index>(k)) = spec.covariance.row(cond[k]).dot(b);
    }
    const Matrix scc = select(spec.covariance, cond, cond);
    est.value = w.dot(pseudo_inverse(scc) * w);
    est.exact = true;
    return est;
  }
  const ConditionalLaw law = conditional_law(spec, cond);
  const StreamKey key = stream_key(config.seed, "conditional-variance", subset_mask(cond));
  const auto n0 = static_cast<std::size_t>(config.n_0);
  const int ni = static_cast<int>(config.n_i);
  std::vector<double> means(n0), vars(n0);
  if (config.exec == Exec::kSerial) {
    kernels::serial::inner_loop(model, law, key, ni, means, vars);
  } else {
    kernels::omp::inner_loop(model, law, key, ni, means, vars);
  }
  const double grand = pairwise_sum(means) / static_cast<double>(n0);
  const double bessel = static_cast<double>(n0) / static_cast<double>(n0 - 1);
  // var(inner means) overstates V by E[inner variance] / N_i.
  std::vector<double> t(n0);
  for (std::size_t i = 0; i < n0; ++i) {
    t[i] = (means[i] - grand) * (means[i] - grand) * bessel - vars[i] / ni;
  }
  const MeanError me = mean_error(t);
  est.value = me.mean;
  est.std_error = me.std_error;
  est.n_evals = config.n_0 * config.n_i;
  return est;
}

PickFreezeBase pick_freeze_base(const ModelHandle& model, const GaussianInputSpec& spec,
                                const EstimatorConfig& config) {
  check_model(model, spec);
  config.validate();
  const auto m = static_cast<Eigen::Index>(config.m);
  PickFreezeBase base;
  base.a.resize(m, spec.dim());
  base.b.resize(m, spec.dim());
  sample_joint(config, spec, stream_key(config.seed, "pick-freeze-a"), false, base.a);
  sample_joint(config, spec, stream_key(config.seed, "pick-freeze-b"), false, base.b);
  base.ga.resize(static_cast<std::size_t>(m));
  base.gb.resize(static_cast<std::size_t>(m));
  evaluate(config, model, base.a, base.ga);
  evaluate(config, model, base.b, base.gb);
  base.centre = (pairwise_sum(base.ga) + pairwise_sum(base.gb)) / (2.0 * static_cast<double>(m));
  return base;
}

PlanTerms plan_terms(const ModelHandle& model, const PickFreezeBase& base, const MixDirection& dir,
                     const EstimatorConfig& config) {
  const std::size_t m = base.ga.size();
  std::vector<double> gm(m);
  if (config.exec == Exec::kSerial) {
    kernels::serial::evaluate_mixed(model, base.a, base.b, dir, gm);
  } else {
    kernels::omp::evaluate_mixed(model, base.a, base.b, dir, gm);
  }
  PlanTerms t;
  t.first_order.resize(m);
  t.total.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    // gm shares only the target innovation with gb.
    t.first_order[i] = (base.gb[i] - base.centre) * (gm[i] - base.ga[i]);
    const double diff = base.ga[i] - gm[i];
    t.total[i] = 0.5 * diff * diff;
  }
  return t;
}

double linear_plan_variance(const ModelHandle& model, const GaussianInputSpec& spec,
                            const ErPlan& plan) {
  const auto& beta = *model.linear_coefficients;
  const MixDirection dir = mix_direction(plan);
  double slope = 0.0;
  for (std::size_t k = 0; k < dir.index.size(); ++k) {
    slope += beta[dir.index[k]] * dir.jac(static_cast<Eigen::Index>(k));
  }
  return slope * slope * spec.variance(plan.target);
}

SfVariances sf_variances(const ModelHandle& model, const GaussianInputSpec& spec,
                         const ErPlan& plan, const EstimatorConfig& config) {
  check_model(model, spec);
  config.validate();
  SfVariances out;
  if (use_exact_path(model, config)) {
    const double v = linear_plan_variance(model, spec, plan);
    out.first_order = {v, 0.0, 0, true};
    out.total = {v, 0.0, 0, true};
    return out;
  }
  const PickFreezeBase base = pick_freeze_base(model, spec, config);
  const PlanTerms t = plan_terms(model, base, mix_direction(plan), config);
  const MeanError fo = mean_error(t.first_order);
  const MeanError tot = mean_error(t.total);
  const std::uint64_t evals = 3 * config.m;
  out.first_order = {fo.mean, fo.std_error, evals, false};
  out.total = {tot.mean, tot.std_error, evals, false};
  return out;
}

GsiTotal gsi_total_of_dm(const DependencyModel& dm, std::span<const int> u, int j) {
  const Vector jac = jacobian_column(dm, u, j);
  GsiTotal g;
  for (int l = static_cast<int>(u.size()); l < dm.size(); ++l) {
    g.trace_var += dm.innovation_variances(l);
  }
  const double var_j = dm.innovation_variances(static_cast<Eigen::Index>(u.size()));
  g.gsi_t = jac.squaredNorm() * var_j / g.trace_var;
  return g;
}

VarianceEstimate gsi_total_mc(const DependencyModel& dm, std::span<const int> u, int j,
                              const EstimatorConfig& config) {
  config.validate();
  const GsiTotal exact = gsi_total_of_dm(dm, u, j);
  const int p = static_cast<int>(u.size());
  const int n = dm.size();
  const StreamKey key = stream_key(config.seed, "gsi-total", subset_mask(u), static_cast<std::uint64_t>(j));
  std::vector<double> terms(static_cast<std::size_t>(config.m));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    NormalStream ns(key, i);
    Vector sd = dm.innovation_variances.cwiseSqrt();
    Vector xi(n);
    for (int l = 0; l < n; ++l) xi(l) = sd(l) * ns.next();
    Vector xi2 = xi;
    xi2(p) = sd(p) * ns.next();
    auto block = [&](const Vector& v) {
      std::vector<double> z(v.data() + 1, v.data() + n);
      Vector x(n);
      x(0) = dm.mean(0) + v(0);
      x.tail(n - 1) = dm_apply(dm, x(0), z);
      return x;
    };
    const Vector x1 = block(xi), x2 = block(xi2);
    // r_{u,j} outputs the coordinates outside u, i.e. positions p.. in the ordering.
    terms[i] = 0.5 * (x1 - x2).tail(n - p).squaredNorm() / exact.trace_var;
  }
  const MeanError me = mean_error(terms);
  return {me.mean, me.std_error, 0, false};
}

}  // namespace dsikit
