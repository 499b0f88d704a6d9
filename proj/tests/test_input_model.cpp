#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsikit/error.hpp"
#include "dsikit/input_model.hpp"
#include "dsikit/testcase.hpp"

using namespace dsikit;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kConfigParse;
}

}  // namespace

TEST_CASE("blocks are detected from the sparsity pattern") {
  Matrix cov = Matrix::Identity(5, 5);
  cov(0, 3) = cov(3, 0) = 0.5;
  cov(3, 4) = cov(4, 3) = 0.2;
  const GaussianInputSpec s = build_input_spec(Vector::Zero(5), cov);
  CHECK(s.partition.independent == std::vector<int>{1, 2});
  REQUIRE(s.partition.blocks.size() == 1);
  CHECK(s.partition.blocks[0] == std::vector<int>{0, 3, 4});
  CHECK(s.block_of(4) == 0);
  CHECK(s.block_of(1) == -1);
}

TEST_CASE("covariance validation") {
  Matrix cov = Matrix::Identity(3, 3);
  cov(0, 1) = 0.3;
  CHECK(code_of([&] { build_input_spec(Vector::Zero(3), cov); }) ==
        ErrorCode::kAsymmetricCovariance);
  cov(1, 0) = 0.3;
  CHECK(code_of([&] { build_input_spec(Vector::Zero(2), cov); }) ==
        ErrorCode::kDimensionMismatch);
  cov(0, 1) = cov(1, 0) = 1.5;
  CHECK(code_of([&] { build_input_spec(Vector::Zero(3), cov); }) ==
        ErrorCode::kNotPositiveSemidefinite);
  Matrix zero = Matrix::Identity(2, 2);
  zero(1, 1) = 0.0;
  CHECK(code_of([&] { build_input_spec(Vector::Zero(2), zero); }) == ErrorCode::kZeroVariance);
}

TEST_CASE("rank-deficient but PSD covariances are accepted") {
  const GaussianInputSpec s = reference_spec(correlation_set("C1"));
  CHECK(s.dim() == 3);
  const Matrix c = reference_covariance(correlation_set("C1"));
  Eigen::SelfAdjointEigenSolver<Matrix> es(c);
  CHECK(es.eigenvalues().minCoeff() > -1e-9);
}

TEST_CASE("builtin models and gradients") {
  const ModelHandle lin = register_builtin_model("linear", {1.0, -2.0, 0.5});
  const std::vector<double> x{1.0, 1.0, 2.0};
  CHECK(lin(x) == doctest::Approx(0.0));
  const ModelHandle prod = register_builtin_model("product", {1.0, 2.0, 3.0});
  CHECK(prod(x) == doctest::Approx(12.0));
  const ModelHandle sine = register_builtin_model("additive-nonlinear", {2.0, 1.0, 1.0});
  CHECK(sine(x) == doctest::Approx(3.0 * std::sin(1.0) + std::sin(2.0)));
  REQUIRE(sine.partial_bounds.has_value());
  CHECK((*sine.partial_bounds)[0] == doctest::Approx(2.0));

  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  for (const ModelHandle* m : {&lin, &prod, &sine}) {
    CHECK(gradient_check(*m, spec, 20, 7) < 1e-5);
  }
  CHECK(code_of([] { register_builtin_model("cubic", {1.0}); }) == ErrorCode::kUnknownModel);
}

TEST_CASE("reference covariances for the ten sets") {
  CHECK(correlation_sets().size() == 10);
  const Matrix c = reference_covariance(correlation_set("C4"));
  CHECK(c(0, 0) == 2.0);
  CHECK(c(1, 1) == 8.0);
  CHECK(c(2, 2) == 8.0);
}
