#include "dsikit/kernels.hpp"

#include <algorithm>

#include "dsikit/error.hpp"
#include "kernel_bodies.hpp"

namespace dsikit {

ConditionalLaw conditional_law(const GaussianInputSpec& spec, std::span<const int> cond) {
  ConditionalLaw law;
  law.cond.assign(cond.begin(), cond.end());
  for (int j = 0; j < spec.dim(); ++j) {
    if (std::find(cond.begin(), cond.end(), j) == cond.end()) law.rest.push_back(j);
  }
  const Matrix scc = select(spec.covariance, law.cond, law.cond);
  const Matrix src = select(spec.covariance, law.rest, law.cond);
  const Matrix srr = select(spec.covariance, law.rest, law.rest);
  law.cond_mean = select(spec.mean, law.cond);
  law.rest_mean = select(spec.mean, law.rest);
  law.cond_factor = semidefinite_cholesky(scc).lower;
  law.gain = src * pseudo_inverse(scc);
  Matrix schur = srr - law.gain * src.transpose();
  schur = 0.5 * (schur + schur.transpose());
  // Degeneracy is judged against the marginal variances, not the (possibly
  // tiny) conditional ones.
  law.rest_factor = semidefinite_cholesky(schur, srr.diagonal(), 1e-12).lower;
  return law;
}

namespace kernels::serial {

void sample_joint(const GaussianInputSpec& spec, StreamKey key, bool antithetic, RowMatrix& out) {
  detail::Scratch s;
  for (Eigen::Index i = 0; i < out.rows(); ++i) detail::sample_row(spec, key, antithetic, i, out, s);
}

void evaluate(const ModelHandle& model, const RowMatrix& x, std::span<double> y) {
  for (Eigen::Index i = 0; i < x.rows(); ++i) y[i] = detail::eval_row(model, x, i);
}

void evaluate_mixed(const ModelHandle& model, const RowMatrix& a, const RowMatrix& b,
                    const MixDirection& dir, std::span<double> y) {
  detail::Scratch s;
  for (Eigen::Index i = 0; i < a.rows(); ++i) y[i] = detail::mixed_row(model, a, b, dir, i, s);
}

void inner_loop(const ModelHandle& model, const ConditionalLaw& law, StreamKey key, int n_inner,
                std::span<double> inner_mean, std::span<double> inner_var) {
  detail::Scratch s;
  for (std::size_t i = 0; i < inner_mean.size(); ++i) {
    detail::inner_row(model, law, key, n_inner, static_cast<Eigen::Index>(i), inner_mean[i],
                      inner_var[i], s);
  }
}

}  // namespace kernels::serial
}  // namespace dsikit
