#pragma once

#include <span>
#include <vector>

#include "dsikit/dependency.hpp"
#include "dsikit/input_model.hpp"
#include "dsikit/rng.hpp"

namespace dsikit {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Law of X_rest given X_cond, plus what is needed to draw X_cond itself.
struct ConditionalLaw {
  std::vector<int> cond;
  std::vector<int> rest;
  Vector cond_mean;
  Matrix cond_factor;
  Vector rest_mean;
  Matrix gain;         // Sigma_rc Sigma_cc^+
  Matrix rest_factor;  // factor of the Schur complement
};

ConditionalLaw conditional_law(const GaussianInputSpec& spec, std::span<const int> cond);

// Every kernel writes row/entry i from the draws of sample index i only, so the
// serial and OpenMP versions produce identical bits.
namespace kernels {

namespace serial {
/// Joint draws; out must be sized n x d beforehand. With antithetic set, odd
/// rows mirror the preceding even row about the mean.
void sample_joint(const GaussianInputSpec& spec, StreamKey key, bool antithetic, RowMatrix& out);
void evaluate(const ModelHandle& model, const RowMatrix& x, std::span<double> y);
/// y_i = M(a_i + jac * functional . (b_i - a_i)[index]).
void evaluate_mixed(const ModelHandle& model, const RowMatrix& a, const RowMatrix& b,
                    const MixDirection& dir, std::span<double> y);
/// Per outer draw of X_cond: mean and unbiased variance of n_inner outputs
/// with X_rest drawn from its conditional law.
void inner_loop(const ModelHandle& model, const ConditionalLaw& law, StreamKey key,
                int n_inner, std::span<double> inner_mean, std::span<double> inner_var);
}  // namespace serial

namespace omp {
void sample_joint(const GaussianInputSpec& spec, StreamKey key, bool antithetic, RowMatrix& out);
void evaluate(const ModelHandle& model, const RowMatrix& x, std::span<double> y);
void evaluate_mixed(const ModelHandle& model, const RowMatrix& a, const RowMatrix& b,
                    const MixDirection& dir, std::span<double> y);
void inner_loop(const ModelHandle& model, const ConditionalLaw& law, StreamKey key,
                int n_inner, std::span<double> inner_mean, std::span<double> inner_var);
}  // namespace omp

}  // namespace kernels
}  // namespace dsikit
