#include "dsikit/kernels.hpp"
#include "dsikit/parallel.hpp"
#include "kernel_bodies.hpp"

namespace dsikit::kernels::omp {

void sample_joint(const GaussianInputSpec& spec, StreamKey key, bool antithetic, RowMatrix& out) {
  const Eigen::Index n = out.rows();
#pragma omp parallel num_threads(worker_count())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) detail::sample_row(spec, key, antithetic, i, out, s);
  }
}

void evaluate(const ModelHandle& model, const RowMatrix& x, std::span<double> y) {
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (Eigen::Index i = 0; i < n; ++i) y[i] = detail::eval_row(model, x, i);
}

void evaluate_mixed(const ModelHandle& model, const RowMatrix& a, const RowMatrix& b,
                    const MixDirection& dir, std::span<double> y) {
  const Eigen::Index n = a.rows();
#pragma omp parallel num_threads(worker_count())
  {
    detail::Scratch s;
#pragma omp for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) y[i] = detail::mixed_row(model, a, b, dir, i, s);
  }
}

void inner_loop(const ModelHandle& model, const ConditionalLaw& law, StreamKey key, int n_inner,
                std::span<double> inner_mean, std::span<double> inner_var) {
  const auto n = static_cast<Eigen::Index>(inner_mean.size());
#pragma omp parallel num_threads(worker_count())
  {
    detail::Scratch s;
#pragma omp for schedule(dynamic, 64)
    for (Eigen::Index i = 0; i < n; ++i) {
      detail::inner_row(model, law, key, n_inner, i, inner_mean[i], inner_var[i], s);
    }
  }
}

}  // namespace dsikit::kernels::omp
