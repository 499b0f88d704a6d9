#include <doctest.h>

#include <vector>

#include "dsikit/dependency.hpp"
#include "dsikit/error.hpp"
#include "dsikit/testcase.hpp"

using namespace dsikit;

TEST_CASE("dependency model reproduces the covariance") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const std::vector<int> block{0, 1, 2};
  const std::vector<int> perm{2, 0, 1};
  const DependencyModel dm = build_dm_over(spec, block, perm);
  CHECK(dm.coeff(0, 0) == doctest::Approx(1.0));
  // Cov of the block in permutation order equals C diag(sigma^2) C^T.
  const Matrix implied =
      dm.coeff * dm.innovation_variances.asDiagonal() * dm.coeff.transpose();
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      CHECK(implied(a, b) ==
            doctest::Approx(spec.covariance(perm[a], perm[b])).epsilon(1e-12));
    }
  }
}

TEST_CASE("dm_apply and innovations_of are inverse") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C2"));
  const std::vector<int> block{0, 1, 2};
  const std::vector<int> perm{1, 2, 0};
  const DependencyModel dm = build_dm_over(spec, block, perm);
  const std::vector<double> z{0.3, -1.2};
  const Vector tail = dm_apply(dm, 0.7, z);
  Vector x(3);
  x << 0.7, tail;
  const Vector xi = innovations_of(dm, x);
  CHECK(xi(1) == doctest::Approx(z[0]));
  CHECK(xi(2) == doctest::Approx(z[1]));
  CHECK_THROWS_AS(dm_apply(dm, 0.0, std::vector<double>{1.0}), Error);
}

TEST_CASE("degenerate set C1 flags zero innovations") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C1"));
  const std::vector<int> block{0, 1, 2};
  const DependencyModel dm = build_dm_over(spec, block, block);
  int degenerate = 0;
  for (bool b : dm.degenerate_mask) degenerate += b ? 1 : 0;
  CHECK(degenerate >= 1);
}

TEST_CASE("invalid permutations are rejected") {
  const GaussianInputSpec spec = reference_spec(correlation_set("C4"));
  const std::vector<int> block{0, 1, 2};
  try {
    build_dm_over(spec, block, std::vector<int>{0, 0, 2});
    FAIL("expected PermutationInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPermutationInvalid);
  }
  const GaussianInputSpec c7 = reference_spec(correlation_set("C7"));
  try {
    build_dm(c7, std::vector<int>{0}, std::vector<int>{0});
    FAIL("expected NotADependentBlock");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotADependentBlock);
  }
}

TEST_CASE("jacobian columns match the closed forms") {
  const std::vector<int> all{0, 1, 2};
  for (const auto& c : correlation_sets()) {
    if (is_degenerate(c)) continue;
    const GaussianInputSpec spec = reference_spec(c);
    for (const JacobianCase& jc : jacobian_cases()) {
      const DependencyModel dm = build_dm_over(spec, all, prefix_permutation(all, jc.u, jc.j));
      const Vector got = jacobian_column(dm, jc.u, jc.j);
      const Vector want = closed_form_jacobian(c, jc);
      CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("prefix permutation places u first and j next") {
  const std::vector<int> block{0, 1, 2, 3};
  const std::vector<int> u{3};
  const std::vector<int> p = prefix_permutation(block, u, 1);
  CHECK(p[0] == 3);
  CHECK(p[1] == 1);
}
