#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsikit/bounds.hpp"
#include "dsikit/error.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/quadrature.hpp"
#include "dsikit/testcase.hpp"

using namespace dsikit;

namespace {

EstimatorConfig exact() {
  EstimatorConfig c;
  c.path = PathMode::kExactOnly;
  return c;
}

}  // namespace

TEST_CASE("integrand value at the origin, symmetry and tail") {
  // Phi(0) (1 - Phi(0)) / phi(0) = sqrt(2 pi) / 4.
  CHECK(e_std_integrand(0.0) == doctest::Approx(std::sqrt(2.0 * M_PI) / 4.0));
  CHECK(e_std_integrand(1.3) == doctest::Approx(e_std_integrand(-1.3)));
  // Tail behaves like 1 / |z|.
  CHECK(e_std_integrand(40.0) * 40.0 == doctest::Approx(1.0).epsilon(1e-3));
  for (double z : {0.5, 3.0, 10.0}) {
    const double tail = 0.5 * std::erfc(z / std::sqrt(2.0));
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
    CHECK(mills_ratio(z) == doctest::Approx(tail / pdf).epsilon(1e-12));
  }
}

TEST_CASE("truncated E_std: two quadratures agree and grow logarithmically") {
  for (double t : {4.0, 16.0, 64.0}) {
    const QuadratureResult a = e_std_truncated_tanh_sinh(t);
    const QuadratureResult b = e_std_truncated_gauss_kronrod(t);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  }
  const double i32 = e_std_truncated_tanh_sinh(32.0).value;
  const double i64 = e_std_truncated_tanh_sinh(64.0).value;
  CHECK(i64 - i32 == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-3));
  const EStdAnalysis& a = e_std_analysis();
  CHECK(a.divergent);
  CHECK(std::isinf(e_std()));
}

TEST_CASE("E-factor scales with the variance") {
  CHECK_THROWS_AS(ej_factor(0.0), Error);
  for (double t : {4.0, 8.0}) {
    CHECK(e_factor_truncated(3.0, t).value ==
          doctest::Approx(3.0 * e_std_truncated_tanh_sinh(t).value).epsilon(1e-10));
  }
}

TEST_CASE("independent linear bound coefficient") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C7"));
  const BoundValue b = dub_independent(reference_model(), spec, 1, exact(), 18.0);
  CHECK(b.coefficient == doctest::Approx(8.0 / 36.0));
  CHECK(b.uses_e_factor);
  CHECK(std::isinf(b.value));
}

TEST_CASE("DUB' is finite and dominates DS_T on dependent blocks") {
  for (const char* name : {"C2", "C4", "C6", "C9"}) {
    const GaussianInputSpec spec = reference_spec(correlation_set(name));
    const IndexReport r = full_report(reference_model(), spec, exact());
    for (const InputRow& row : r.rows) {
      if (!row.bounds.dub_prime) continue;
      CHECK(std::isfinite(row.bounds.dub_prime->value));
      CHECK(row.bounds.dub_prime->value >= row.ds_t.value - 1e-10);
    }
  }
}

TEST_CASE("DUB' needs a gradient bound") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle prod = register_builtin_model("product", {1.0, 1.0, 1.0});
  try {
    dub_prime(prod, spec, 0, exact(), 1.0);
    FAIL("expected BoundUnavailable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBoundUnavailable);
  }
  ModelHandle with_bound = prod;
  with_bound.dependent_gradient_bound = 5.0;
  CHECK(std::isfinite(dub_prime(with_bound, spec, 0, exact(), 1.0).value));
}

TEST_CASE("sampled partial bound covers the linear coefficients") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const ModelHandle lin = register_builtin_model("linear", {1.0, -3.0, 2.0});
  EstimatorConfig c = exact();
  const std::vector<int> block{0, 1, 2};
  CHECK(sampled_partial_bound(lin, spec, block, c) == doctest::Approx(3.3));
}
