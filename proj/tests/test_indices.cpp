#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsikit/error.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/parallel.hpp"
#include "dsikit/testcase.hpp"

using namespace dsikit;

namespace {

EstimatorConfig exact() {
  EstimatorConfig c;
  c.path = PathMode::kExactOnly;
  return c;
}

EstimatorConfig mc() {
  EstimatorConfig c;
  c.m = c.n_0 = c.n_v = 5000;
  c.n_i = 10;
  c.n_perm = 100;
  c.path = PathMode::kMcOnly;
  return c;
}

}  // namespace

TEST_CASE("independent inputs: closed-form indices for the linear model") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C7"));
  const IndexReport r = full_report(reference_model(), spec, exact());
  const double want[3] = {1.0 / 9.0, 4.0 / 9.0, 4.0 / 9.0};
  for (const InputRow& row : r.rows) {
    CHECK(row.ds.value == doctest::Approx(want[row.input]).epsilon(1e-12));
    CHECK(row.ds_t.value == doctest::Approx(want[row.input]).epsilon(1e-12));
    CHECK(row.sh.value == doctest::Approx(want[row.input]).epsilon(1e-12));
    REQUIRE(row.s.has_value());
    CHECK(row.s->value == doctest::Approx(want[row.input]).epsilon(1e-12));
  }
  CHECK(r.sigma.value == doctest::Approx(18.0));
}

TEST_CASE("fully correlated C1 splits evenly") {
  const IndexReport r = full_report(reference_model(), reference_spec(correlation_set("C1")), exact());
  for (const InputRow& row : r.rows) {
    CHECK(row.ds.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(row.sh.value == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("shapley effects sum to one and bracket the DSIs") {
  for (const auto& c : correlation_sets()) {
    const IndexReport r = full_report(reference_model(), reference_spec(c), exact());
    double sum = 0.0;
    for (const InputRow& row : r.rows) {
      sum += row.sh.value;
      CHECK(row.ds.value <= row.sh.value + 1e-10);
      CHECK(row.sh.value <= row.ds_t.value + 1e-10);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("shapley engine memoizes subsets") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle lin = reference_model();
  EstimatorConfig c = exact();
  const VarianceEstimate sigma = output_variance(lin, spec, c);
  ShapleyEngine engine(lin, spec, c, sigma);
  for (int j = 0; j < 3; ++j) engine.exact(j);
  CHECK(engine.distinct_subsets() <= 8);
}

TEST_CASE("enumeration only when n_perm equals d!") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle lin = reference_model();
  EstimatorConfig c = exact();
  const VarianceEstimate sigma = output_variance(lin, spec, c);
  c.n_perm = 6;
  CHECK(ShapleyEngine(lin, spec, c, sigma).enumerates_all_permutations());
  c.n_perm = 7;
  CHECK_FALSE(ShapleyEngine(lin, spec, c, sigma).enumerates_all_permutations());
}

TEST_CASE("sobol refuses dependent inputs") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  try {
    sobol(reference_model(), spec, 0, exact());
    FAIL("expected NotIndependentInput");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotIndependentInput);
  }
}

TEST_CASE("Monte Carlo report agrees with the exact report") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C5"));
  const IndexReport e = full_report(reference_model(), spec, exact());
  const IndexReport m = full_report(reference_model(), spec, mc());
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    CHECK(std::abs(m.rows[i].ds.value - e.rows[i].ds.value) <= 4.0 * m.rows[i].ds.std_error);
    CHECK(std::abs(m.rows[i].ds_t.value - e.rows[i].ds_t.value) <= 4.0 * m.rows[i].ds_t.std_error);
    CHECK(std::abs(m.rows[i].sh.value - e.rows[i].sh.value) <= 4.0 * m.rows[i].sh.std_error);
  }
}

TEST_CASE("results do not depend on the worker count or the executor") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C3"));
  const ModelHandle sine = register_builtin_model("additive-nonlinear", {1.0, 0.5, 2.0});
  EstimatorConfig c = mc();
  set_worker_count(1);
  const IndexReport a = full_report(sine, spec, c);
  set_worker_count(3);
  const IndexReport b = full_report(sine, spec, c);
  c.exec = Exec::kSerial;
  const IndexReport s = full_report(sine, spec, c);
  set_worker_count(0);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].ds.value == b.rows[i].ds.value);
    CHECK(a.rows[i].sh.value == b.rows[i].sh.value);
    CHECK(a.rows[i].ds_t.value == s.rows[i].ds_t.value);
  }
}

TEST_CASE("mixed layout: independent input next to a block") {
  Matrix cov = Matrix::Identity(4, 4);
  cov(1, 2) = cov(2, 1) = 0.6;
  cov(1, 3) = cov(3, 1) = -0.3;
  const GaussianInputSpec spec = build_input_spec(Vector::Zero(4), cov);
  const ModelHandle lin = register_builtin_model("linear", {1.0, 2.0, -1.0, 0.5});
  const IndexReport r = full_report(lin, spec, exact());
  REQUIRE(r.rows[0].s.has_value());
  CHECK_FALSE(r.rows[1].s.has_value());
  // The independent input's DSI equals beta^2 var / Sigma.
  CHECK(r.rows[0].ds.value == doctest::Approx(1.0 / r.sigma.value).epsilon(1e-12));
  double sum = 0.0;
  for (const InputRow& row : r.rows) sum += row.sh.value;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
