#include "dsikit/input_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "dsikit/error.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {

int GaussianInputSpec::block_of(int j) const {
  for (std::size_t k = 0; k < partition.blocks.size(); ++k) {
    const auto& b = partition.blocks[k];
    if (std::find(b.begin(), b.end(), j) != b.end()) return static_cast<int>(k);
  }
  return -1;
}

Partition detect_blocks(const Matrix& covariance, double zero_threshold) {
  const int d = static_cast<int>(covariance.rows());
  std::vector<int> parent(static_cast<std::size_t>(d));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double denom = std::sqrt(covariance(i, i) * covariance(j, j));
      if (denom <= 0.0) continue;
      if (std::abs(covariance(i, j)) / denom > zero_threshold) {
        const int a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<int>> comps(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) comps[find(i)].push_back(i);
  Partition p;
  // Roots are the smallest member, so iterating roots in order gives blocks
  // ordered by smallest member.
  for (int r = 0; r < d; ++r) {
    if (comps[r].size() == 1) {
      p.independent.push_back(r);
    } else if (comps[r].size() > 1) {
      p.blocks.push_back(comps[r]);
    }
  }
  return p;
}

GaussianInputSpec build_input_spec(const Vector& mean, const Matrix& covariance,
                                   double psd_tolerance, double zero_threshold) {
  const Eigen::Index d = covariance.rows();
  if (d < 1 || covariance.cols() != d || mean.size() != d) {
    std::ostringstream os;
    os << "mean has length " << mean.size() << " but covariance is " << covariance.rows()
       << "x" << covariance.cols();
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double a = covariance(i, j), b = covariance(j, i);
      const double scale = std::max({std::abs(a), std::abs(b),
                                     std::sqrt(std::abs(covariance(i, i) * covariance(j, j)))});
      if (std::abs(a - b) > 1e-12 * scale) {
        std::ostringstream os;
        os << "covariance(" << i + 1 << "," << j + 1 << ") = " << a << " but covariance("
           << j + 1 << "," << i + 1 << ") = " << b;
        throw Error(ErrorCode::kAsymmetricCovariance, os.str());
      }
    }
  }
  Matrix sym = 0.5 * (covariance + covariance.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  const double lmax = eig.eigenvalues().maxCoeff();
  if (lmin < -psd_tolerance * std::max(lmax, 0.0) || lmax < 0.0) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lmin << " is below -" << psd_tolerance << " * " << lmax;
    throw Error(ErrorCode::kNotPositiveSemidefinite, os.str());
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!(sym(i, i) > 0.0)) {
      throw Error(ErrorCode::kZeroVariance,
                  "input " + std::to_string(i + 1) + " has zero variance");
    }
  }
  GaussianInputSpec spec;
  spec.mean = mean;
  spec.covariance = sym;
  spec.psd_tolerance = psd_tolerance;
  spec.partition = detect_blocks(sym, zero_threshold);
  spec.joint_factor = semidefinite_cholesky(sym).lower;
  return spec;
}

std::optional<double> ModelHandle::block_partial_bound(std::span<const int> block) const {
  if (!partial_bounds) return std::nullopt;
  double m = 0.0;
  for (int j : block) m = std::max(m, (*partial_bounds)[static_cast<std::size_t>(j)]);
  return m;
}

ModelHandle make_model(std::string name, int arity, Evaluator evaluator, Gradient gradient,
                       std::optional<std::vector<double>> partial_bounds) {
  ModelHandle h;
  h.name = std::move(name);
  h.arity = arity;
  h.evaluator = std::move(evaluator);
  h.gradient = std::move(gradient);
  h.partial_bounds = std::move(partial_bounds);
  return h;
}

ModelHandle register_builtin_model(std::string_view name, std::vector<double> params) {
  const int d = static_cast<int>(params.size());
  if (d < 1) throw Error(ErrorCode::kParamLengthMismatch, "model needs one parameter per input");
  auto check_arity = [d](std::span<const double> x) {
    if (static_cast<int>(x.size()) != d) {
      throw Error(ErrorCode::kParamLengthMismatch, "point has " + std::to_string(x.size()) +
                                                       " coordinates, model expects " +
                                                       std::to_string(d));
    }
  };
  std::vector<double> abs_beta(params.size());
  std::transform(params.begin(), params.end(), abs_beta.begin(),
                 [](double b) { return std::abs(b); });

  if (name == "linear") {
    auto eval = [beta = params, check_arity](std::span<const double> x) {
      check_arity(x);
      double s = 0.0;
      for (std::size_t i = 0; i < beta.size(); ++i) s += beta[i] * x[i];
      return s;
    };
    auto grad = [beta = params](std::span<const double>, std::span<double> g) {
      std::copy(beta.begin(), beta.end(), g.begin());
    };
    ModelHandle h = make_model("linear", d, eval, grad, abs_beta);
    h.linear_coefficients = params;
    return h;
  }
  if (name == "product") {
    auto eval = [beta = params, check_arity](std::span<const double> x) {
      check_arity(x);
      double p = 1.0;
      for (std::size_t i = 0; i < beta.size(); ++i) p *= beta[i] * x[i];
      return p;
    };
    auto grad = [beta = params](std::span<const double> x, std::span<double> g) {
      for (std::size_t j = 0; j < beta.size(); ++j) {
        double p = beta[j];
        for (std::size_t i = 0; i < beta.size(); ++i) {
          if (i != j) p *= beta[i] * x[i];
        }
        g[j] = p;
      }
    };
    // Unbounded partial derivatives: no M_1.
    return make_model("product", d, eval, grad);
  }
  if (name == "additive-nonlinear") {
    auto eval = [beta = params, check_arity](std::span<const double> x) {
      check_arity(x);
      double s = 0.0;
      for (std::size_t i = 0; i < beta.size(); ++i) s += beta[i] * std::sin(x[i]);
      return s;
    };
    auto grad = [beta = params](std::span<const double> x, std::span<double> g) {
      for (std::size_t i = 0; i < beta.size(); ++i) g[i] = beta[i] * std::cos(x[i]);
    };
    return make_model("additive-nonlinear", d, eval, grad, abs_beta);
  }
  throw Error(ErrorCode::kUnknownModel, "unknown model '" + std::string(name) +
                                            "' (expected linear, product or additive-nonlinear)");
}

double gradient_check(const ModelHandle& model, const GaussianInputSpec& spec, int n_points,
                      std::uint64_t seed) {
  if (!model.has_gradient()) {
    throw Error(ErrorCode::kGradientUnavailable, "model '" + model.name + "' has no gradient");
  }
  const int d = spec.dim();
  const StreamKey key = stream_key(seed, "gradient-check");
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(d)), g(static_cast<std::size_t>(d));
  for (int p = 0; p < n_points; ++p) {
    NormalStream ns(key, static_cast<std::uint64_t>(p));
    Vector z(d);
    for (int i = 0; i < d; ++i) z(i) = ns.next();
    const Vector pt = spec.mean + spec.joint_factor * z;
    for (int i = 0; i < d; ++i) x[i] = pt(i);
    model.gradient(x, g);
    for (int i = 0; i < d; ++i) {
      const double h = 1e-5 * std::max(std::abs(x[i]), 1.0);
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (model(xp) - model(xm)) / (2.0 * h);
      const double scale = std::max({std::abs(g[i]), std::abs(fd), 1e-8});
      worst = std::max(worst, std::abs(g[i] - fd) / scale);
    }
  }
  return worst;
}

}  // namespace dsikit
