#include "dsikit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dsikit/combinatorics.hpp"
#include "dsikit/dependency.hpp"
#include "dsikit/error.hpp"
#include "dsikit/quadrature.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {
namespace {

double times_e_std(double coefficient) {
  return coefficient == 0.0 ? 0.0 : coefficient * e_std();
}

const std::vector<int>& block_of_input(const GaussianInputSpec& spec, int j) {
  const int k = spec.block_of(j);
  if (k < 0) {
    throw Error(ErrorCode::kNotADependentBlock,
                "input " + std::to_string(j + 1) + " is not in a dependent block");
  }
  return spec.partition.blocks[static_cast<std::size_t>(k)];
}

double inverse_binomial(int n, int k) {
  return 1.0 / static_cast<double>(binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
}

}  // namespace

double ej_factor(double sigma2) {
  if (!(sigma2 > 0.0)) {
    throw Error(ErrorCode::kNonpositiveVariance, "E-factor needs a positive variance");
  }
  return sigma2 * e_std();
}

BoundValue dub_independent(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                           const EstimatorConfig& config) {
  return dub_independent(model, spec, j, config, output_variance(model, spec, config).value);
}

BoundValue dub_independent(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                           const EstimatorConfig& config, double sigma) {
  if (spec.block_of(j) >= 0) {
    throw Error(ErrorCode::kNotIndependentInput,
                "input " + std::to_string(j + 1) + " sits in a dependent block");
  }
  const double var_j = spec.variance(j);
  BoundValue b;
  if (model.linear_coefficients) {
    const double beta = (*model.linear_coefficients)[static_cast<std::size_t>(j)];
    b.coefficient = beta * beta * var_j / (2.0 * sigma);
    b.value = times_e_std(b.coefficient);
    b.uses_e_factor = true;
    b.path = "linear";
    return b;
  }
  if (!model.has_gradient()) {
    throw Error(ErrorCode::kGradientUnavailable, "model '" + model.name + "' has no gradient");
  }
  // Plain MC over joint draws. The weight has infinite mean for Gaussian
  // inputs, so this sample mean does not settle as N_v grows.
  const int d = spec.dim();
  const double sd = std::sqrt(var_j);
  const StreamKey key = stream_key(config.seed, "dub-independent", static_cast<std::uint64_t>(j));
  std::vector<double> terms(static_cast<std::size_t>(config.n_v));
  std::vector<double> x(static_cast<std::size_t>(d)), g(static_cast<std::size_t>(d));
  Vector z(d);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    NormalStream ns(key, i);
    for (int k = 0; k < d; ++k) z(k) = ns.next();
    const Vector pt = spec.mean + spec.joint_factor * z;
    for (int k = 0; k < d; ++k) x[k] = pt(k);
    model.gradient(x, g);
    const double u = (x[j] - spec.mean(j)) / sd;
    const double density = std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi);
    terms[i] = g[j] * g[j] * var_j * e_std_integrand(u) / density;
  }
  b.value = pairwise_sum(terms) / static_cast<double>(terms.size()) / (2.0 * sigma);
  b.coefficient = b.value;
  b.path = "mc";
  return b;
}

double sampled_partial_bound(const ModelHandle& model, const GaussianInputSpec& spec,
                             std::span<const int> block, const EstimatorConfig& config) {
  if (!model.has_gradient()) {
    throw Error(ErrorCode::kBoundUnavailable,
                "model '" + model.name + "' has neither a derivative bound nor a gradient");
  }
  const int d = spec.dim();
  const StreamKey key = stream_key(config.seed, "partial-bound");
  std::vector<double> x(static_cast<std::size_t>(d)), g(static_cast<std::size_t>(d));
  Vector z(d);
  double best = 0.0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    NormalStream ns(key, i);
    for (int k = 0; k < d; ++k) z(k) = ns.next();
    const Vector pt = spec.mean + spec.joint_factor * z;
    for (int k = 0; k < d; ++k) x[k] = pt(k);
    model.gradient(x, g);
    for (int l : block) best = std::max(best, std::abs(g[l]));
  }
  return 1.1 * best;
}

DubCoefficients dub_coefficients(const ModelHandle& model, const GaussianInputSpec& spec,
                                 std::span<const int> indices, int j, double sigma,
                                 const EstimatorConfig& config) {
  std::vector<int> block(indices.begin(), indices.end());
  std::sort(block.begin(), block.end());
  const int dk = static_cast<int>(block.size());
  DubCoefficients c;
  if (auto m1 = model.block_partial_bound(block)) {
    c.partial_bound = *m1;
  } else {
    c.partial_bound = sampled_partial_bound(model, spec, block, config);
    c.heuristic = true;
  }
  const double var_j = spec.variance(j);
  double general = 0.0, linear = 0.0;
  for (const auto& u : subsets_excluding(block, j)) {
    const DependencyModel dm = build_dm_over(spec, block, prefix_permutation(block, u, j));
    const double jn = jacobian_column(dm, u, j).squaredNorm();
    const int s = static_cast<int>(u.size());
    const double w = inverse_binomial(dk - 1, s);
    general += w * (dk - s) * jn * var_j;
    if (model.linear_coefficients) {
      double m_rest = 0.0;
      for (int l : block) {
        if (std::find(u.begin(), u.end(), l) == u.end()) {
          const double b = (*model.linear_coefficients)[static_cast<std::size_t>(l)];
          m_rest += b * b;
        }
      }
      linear += w * m_rest * jn * var_j;
    }
  }
  c.general = c.partial_bound * c.partial_bound * general / (2.0 * dk * sigma);
  if (model.linear_coefficients) c.linear = linear / (2.0 * dk * sigma);
  return c;
}

BoundValue dub(const ModelHandle& model, const GaussianInputSpec& spec, int j,
               const EstimatorConfig& config) {
  return dub(model, spec, j, config, output_variance(model, spec, config).value);
}

BoundValue dub(const ModelHandle& model, const GaussianInputSpec& spec, int j,
               const EstimatorConfig& config, double sigma) {
  const auto& block = block_of_input(spec, j);
  const DubCoefficients c = dub_coefficients(model, spec, block, j, sigma, config);
  BoundValue b;
  b.uses_e_factor = true;
  if (c.linear) {
    b.coefficient = *c.linear;
    b.path = "linear";
  } else {
    b.coefficient = c.general;
    b.heuristic = c.heuristic;
    b.path = "general";
  }
  b.value = times_e_std(b.coefficient);
  return b;
}

std::optional<double> dependent_gradient_bound(const ModelHandle& model,
                                               const GaussianInputSpec& spec,
                                               std::span<const int> indices) {
  if (model.dependent_gradient_bound) return model.dependent_gradient_bound;
  std::vector<int> block(indices.begin(), indices.end());
  std::sort(block.begin(), block.end());
  if (model.linear_coefficients) {
    const auto& beta = *model.linear_coefficients;
    double best = 0.0;
    for (int j : block) {
      for (const auto& u : subsets_excluding(block, j)) {
        const DependencyModel dm = build_dm_over(spec, block, prefix_permutation(block, u, j));
        const Vector jac = jacobian_column(dm, u, j);
        const double norm = jac.norm();
        if (norm == 0.0) continue;
        double slope = 0.0;
        for (std::size_t k = 0; k < block.size(); ++k) {
          slope += beta[block[k]] * jac(static_cast<Eigen::Index>(k));
        }
        best = std::max(best, std::abs(slope) / norm);
      }
    }
    return best;
  }
  if (model.partial_bounds) {
    double sq = 0.0;
    for (int l : block) sq += std::pow((*model.partial_bounds)[static_cast<std::size_t>(l)], 2);
    return std::sqrt(sq);
  }
  return std::nullopt;
}

BoundValue dub_prime(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                     const EstimatorConfig& config) {
  return dub_prime(model, spec, j, config, output_variance(model, spec, config).value);
}

BoundValue dub_prime(const ModelHandle& model, const GaussianInputSpec& spec, int j,
                     const EstimatorConfig& config, double sigma) {
  (void)config;
  const auto& block = block_of_input(spec, j);
  const auto md = dependent_gradient_bound(model, spec, block);
  if (!md) {
    throw Error(ErrorCode::kBoundUnavailable,
                "no dependent-gradient bound for model '" + model.name + "'");
  }
  const int dk = static_cast<int>(block.size());
  double sum = 0.0;
  for (const auto& u : subsets_excluding(block, j)) {
    const DependencyModel dm = build_dm_over(spec, block, prefix_permutation(block, u, j));
    const GsiTotal g = gsi_total_of_dm(dm, u, j);
    sum += inverse_binomial(dk - 1, static_cast<int>(u.size())) * g.trace_var * g.gsi_t;
  }
  BoundValue b;
  b.value = (*md) * (*md) * sum / (dk * sigma);
  b.coefficient = b.value;
  b.path = "gsi";
  return b;
}

std::vector<BoundRow> bound_report(const ModelHandle& model, const GaussianInputSpec& spec,
                                   const EstimatorConfig& config, double sigma) {
  std::vector<BoundRow> rows;
  for (int j = 0; j < spec.dim(); ++j) {
    BoundRow r;
    r.input = j;
    if (spec.block_of(j) < 0) {
      r.dub = dub_independent(model, spec, j, config, sigma);
    } else {
      r.dub = dub(model, spec, j, config, sigma);
      try {
        r.dub_prime = dub_prime(model, spec, j, config, sigma);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBoundUnavailable) throw;
      }
    }
    r.min_bound = r.dub_prime ? std::min(r.dub.value, r.dub_prime->value) : r.dub.value;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dsikit
