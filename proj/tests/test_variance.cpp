#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsikit/dependency.hpp"
#include "dsikit/error.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/testcase.hpp"
#include "dsikit/variance.hpp"

using namespace dsikit;

namespace {

EstimatorConfig mc(std::uint64_t m = 20000) {
  EstimatorConfig c;
  c.m = c.n_0 = c.n_v = m;
  c.n_i = 10;
  c.path = PathMode::kMcOnly;
  return c;
}

// Var(sin X) for X ~ N(mu, s2).
double var_sin(double mu, double s2) {
  const double e1 = std::sin(mu) * std::exp(-s2 / 2.0);
  const double e2 = 0.5 * (1.0 - std::cos(2.0 * mu) * std::exp(-2.0 * s2));
  return e2 - e1 * e1;
}

GaussianInputSpec independent_spec() {
  Vector mean(3);
  mean << 0.4, -1.0, 0.0;
  Vector var(3);
  var << 0.5, 1.0, 2.0;
  return build_input_spec(mean, Matrix(var.asDiagonal()));
}

}  // namespace

TEST_CASE("sine model output variance against the closed form") {
  const GaussianInputSpec spec = independent_spec();
  const std::vector<double> beta{1.0, 2.0, 0.5};
  const ModelHandle sine = register_builtin_model("additive-nonlinear", beta);
  double want = 0.0;
  for (int j = 0; j < 3; ++j) want += beta[j] * beta[j] * var_sin(spec.mean(j), spec.variance(j));
  const VarianceEstimate v = output_variance(sine, spec, mc());
  CHECK(std::abs(v.value - want) <= 4.0 * v.std_error);
  CHECK(v.n_evals == 20000);
}

TEST_CASE("sine model Sobol indices against the closed form") {
  const GaussianInputSpec spec = independent_spec();
  const std::vector<double> beta{1.0, 2.0, 0.5};
  const ModelHandle sine = register_builtin_model("additive-nonlinear", beta);
  double total = 0.0;
  std::vector<double> part(3);
  for (int j = 0; j < 3; ++j) {
    part[j] = beta[j] * beta[j] * var_sin(spec.mean(j), spec.variance(j));
    total += part[j];
  }
  for (int j = 0; j < 3; ++j) {
    const DsiResult r = sobol(sine, spec, j, mc());
    CHECK(std::abs(r.main.value - part[j] / total) <= 4.0 * r.main.std_error);
    CHECK(std::abs(r.total.value - part[j] / total) <= 4.0 * r.total.std_error);
  }
}

TEST_CASE("product model: zero main effects, unit total effects") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C7"));
  const ModelHandle prod = register_builtin_model("product", {1.0, 1.0, 1.0});
  for (int j = 0; j < 3; ++j) {
    const DsiResult r = sobol(prod, spec, j, mc());
    CHECK(std::abs(r.main.value) <= 4.0 * r.main.std_error + 1e-3);
    CHECK(std::abs(r.total.value - 1.0) <= 4.0 * r.total.std_error + 1e-3);
  }
}

TEST_CASE("linear conditional variance: exact vs double loop") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle lin = reference_model();
  EstimatorConfig exact;
  exact.path = PathMode::kExactOnly;
  for (const std::vector<int>& u : {std::vector<int>{0}, std::vector<int>{1, 2}}) {
    const VarianceEstimate e = conditional_variance_V(lin, spec, u, exact);
    const VarianceEstimate m = conditional_variance_V(lin, spec, u, mc(5000));
    CHECK(e.exact);
    CHECK(std::abs(e.value - m.value) <= 4.0 * m.std_error);
  }
  const VarianceEstimate full = output_variance(lin, spec, exact);
  const Matrix c = reference_covariance(correlation_set("C4"));
  CHECK(full.value == doctest::Approx(c.sum()).epsilon(1e-14));
}

TEST_CASE("exact path is refused for nonlinear models") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle sine = register_builtin_model("additive-nonlinear", {1.0, 1.0, 1.0});
  EstimatorConfig exact;
  exact.path = PathMode::kExactOnly;
  try {
    output_variance(sine, spec, exact);
    FAIL("expected ExactPathUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kExactPathUnavailable);
  }
}

TEST_CASE("config validation") {
  EstimatorConfig c;
  c.m = 1;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("gsi total index: closed form vs pick-freeze") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C3"));
  const std::vector<int> all{0, 1, 2};
  const std::vector<int> u{1};
  const DependencyModel dm = build_dm_over(spec, all, prefix_permutation(all, u, 0));
  const GsiTotal g = gsi_total_of_dm(dm, u, 0);
  const VarianceEstimate m = gsi_total_mc(dm, u, 0, mc());
  CHECK(g.gsi_t >= 0.0);
  CHECK(g.gsi_t <= 1.0 + 1e-12);
  CHECK(std::abs(g.gsi_t - m.value) <= 4.0 * m.std_error + 1e-12);
}
