// Serial vs OpenMP kernels on the C4 layout with the additive sine model.
#include <vector>

#include <benchmark/benchmark.h>

#include "dsikit/kernels.hpp"
#include "dsikit/testcase.hpp"

namespace {

using namespace dsikit;

const GaussianInputSpec& spec() {
  static const GaussianInputSpec s = reference_spec(correlation_set("C4"));
  return s;
}

const ModelHandle& model() {
  static const ModelHandle m = register_builtin_model("additive-nonlinear", {1.0, 1.0, 1.0});
  return m;
}

template <bool Parallel>
void BM_sample_and_evaluate(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  RowMatrix x(n, 3);
  std::vector<double> y(static_cast<std::size_t>(n));
  const StreamKey key = stream_key(1, "bench");
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::sample_joint(spec(), key, false, x);
      kernels::omp::evaluate(model(), x, y);
    } else {
      kernels::serial::sample_joint(spec(), key, false, x);
      kernels::serial::evaluate(model(), x, y);
    }
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

template <bool Parallel>
void BM_inner_loop(benchmark::State& state) {
  const auto n_outer = static_cast<std::size_t>(state.range(0));
  const std::vector<int> cond{0};
  const ConditionalLaw law = conditional_law(spec(), cond);
  std::vector<double> means(n_outer), vars(n_outer);
  const StreamKey key = stream_key(1, "bench-inner");
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::omp::inner_loop(model(), law, key, 10, means, vars);
    } else {
      kernels::serial::inner_loop(model(), law, key, 10, means, vars);
    }
    benchmark::DoNotOptimize(means.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n_outer) * 10);
}

}  // namespace

BENCHMARK(BM_sample_and_evaluate<false>)->Name("sample_evaluate/serial")->Arg(10000)->Arg(100000);
BENCHMARK(BM_sample_and_evaluate<true>)->Name("sample_evaluate/omp")->Arg(10000)->Arg(100000);
BENCHMARK(BM_inner_loop<false>)->Name("inner_loop/serial")->Arg(10000);
BENCHMARK(BM_inner_loop<true>)->Name("inner_loop/omp")->Arg(10000);

BENCHMARK_MAIN();
