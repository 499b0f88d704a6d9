#pragma once

// Per-index bodies shared by the serial and OpenMP kernels.

#include <cstdint>
#include <vector>

#include "dsikit/kernels.hpp"

namespace dsikit::kernels::detail {

struct Scratch {
  std::vector<double> x;
  Vector z;
  Vector zr;
  Vector xc;
  std::vector<double> y;
};

inline void sample_row(const GaussianInputSpec& spec, StreamKey key, bool antithetic,
                       Eigen::Index i, RowMatrix& out, Scratch& s) {
  const int d = spec.dim();
  s.z.resize(d);
  const auto idx = static_cast<std::uint64_t>(antithetic ? i / 2 : i);
  NormalStream ns(key, idx);
  for (int k = 0; k < d; ++k) s.z(k) = ns.next();
  if (antithetic && (i % 2) == 1) s.z = -s.z;
  out.row(i) = (spec.mean + spec.joint_factor * s.z).transpose();
}

inline double eval_row(const ModelHandle& model, const RowMatrix& x, Eigen::Index i) {
  return model(std::span<const double>(x.row(i).data(), static_cast<std::size_t>(x.cols())));
}

inline double mixed_row(const ModelHandle& model, const RowMatrix& a, const RowMatrix& b,
                        const MixDirection& dir, Eigen::Index i, Scratch& s) {
  const auto d = static_cast<std::size_t>(a.cols());
  s.x.resize(d);
  for (std::size_t k = 0; k < d; ++k) s.x[k] = a(i, static_cast<Eigen::Index>(k));
  double t = 0.0;
  for (std::size_t k = 0; k < dir.index.size(); ++k) {
    const int c = dir.index[k];
    t += dir.functional(static_cast<Eigen::Index>(k)) * (b(i, c) - a(i, c));
  }
  for (std::size_t k = 0; k < dir.index.size(); ++k) {
    s.x[dir.index[k]] += dir.jac(static_cast<Eigen::Index>(k)) * t;
  }
  return model(s.x);
}

inline void inner_row(const ModelHandle& model, const ConditionalLaw& law, StreamKey key,
                      int n_inner, Eigen::Index i, double& mean, double& var, Scratch& s) {
  const auto nc = static_cast<Eigen::Index>(law.cond.size());
  const auto nr = static_cast<Eigen::Index>(law.rest.size());
  NormalStream ns(key, static_cast<std::uint64_t>(i));
  s.z.resize(nc);
  for (Eigen::Index k = 0; k < nc; ++k) s.z(k) = ns.next();
  s.xc = law.cond_mean + law.cond_factor * s.z;
  const Vector centre = law.rest_mean + law.gain * (s.xc - law.cond_mean);
  s.x.assign(static_cast<std::size_t>(nc + nr), 0.0);
  for (Eigen::Index k = 0; k < nc; ++k) s.x[law.cond[k]] = s.xc(k);
  s.y.resize(static_cast<std::size_t>(n_inner));
  s.zr.resize(nr);
  for (int r = 0; r < n_inner; ++r) {
    for (Eigen::Index k = 0; k < nr; ++k) s.zr(k) = ns.next();
    const Vector xr = centre + law.rest_factor * s.zr;
    for (Eigen::Index k = 0; k < nr; ++k) s.x[law.rest[k]] = xr(k);
    s.y[r] = model(s.x);
  }
  double m = 0.0;
  for (double v : s.y) m += v;
  m /= n_inner;
  double q = 0.0;
  for (double v : s.y) q += (v - m) * (v - m);
  mean = m;
  var = n_inner > 1 ? q / (n_inner - 1) : 0.0;
}

}  // namespace dsikit::kernels::detail
