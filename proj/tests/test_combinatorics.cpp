#include <doctest.h>

#include <vector>

#include "dsikit/combinatorics.hpp"
#include "dsikit/error.hpp"

using namespace dsikit;

TEST_CASE("binomial and factorial small values") {
  CHECK(binomial(5, 2) == Count(10));
  CHECK(binomial(0, 0) == Count(1));
  CHECK(binomial(3, 5) == Count(0));
  CHECK(factorial(10) == Count(3628800));
  CHECK(to_string(factorial(20)) == "2432902008176640000");
}

TEST_CASE("factorial overflow is reported") {
  CHECK_NOTHROW(factorial(34));
  try {
    factorial(40);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOverflow);
  }
}

TEST_CASE("shapley weights sum to one over subset sizes") {
  for (int d = 1; d <= 12; ++d) {
    Rational total = 0;
    for (int s = 0; s < d; ++s) total += shapley_weight(d, s).exact * Rational(binomial(d - 1, s));
    CHECK(total == Rational(1));
  }
  CHECK(shapley_weight(3, 1).value == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("subsets_excluding orders by size then position") {
  const std::vector<int> ground{0, 2, 5};
  const auto subs = subsets_excluding(ground, 2);
  REQUIRE(subs.size() == 4);
  CHECK(subs[0].empty());
  CHECK(subs[1] == std::vector<int>{0});
  CHECK(subs[2] == std::vector<int>{5});
  CHECK(subs[3] == std::vector<int>{0, 5});
  try {
    subsets_excluding(ground, 3);
    FAIL("expected IndexNotInGround");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIndexNotInGround);
  }
}

TEST_CASE("symmetric plan for a block of three") {
  const std::vector<int> sizes{3};
  const SymmetricPlan p = symmetric_plan(sizes);
  // Positions hold 1, 2, 1 permutations-with-prefix counts; lcm gives 6.
  REQUIRE(p.lambda.size() == 1);
  for (const Count& l : p.lambda[0]) CHECK(l > Count(0));
  CHECK(p.r_min_s > Count(0));
}

TEST_CASE("hockey-stick identity on a small case") {
  const HockeyStickResult r = hockey_stick_check(6, 3, 1);
  CHECK(r.expected == doctest::Approx(2.0));
  CHECK(r.computed == doctest::Approx(r.expected).epsilon(1e-14));
}

TEST_CASE("cost table for one block of three") {
  const std::vector<int> blocks{3};
  const CostTable t = cost_table(3, blocks, 100, 10, 100, 100, 50);
  CHECK(t.d_max == 3);
  CHECK(t.c_l == Count(2400));
  CHECK(t.c == Count(10 * 100 * 6 * 2 + 100));
  CHECK(t.c_prime == Count(10 * 100 * 50 * 2 + 100));
  const CostTable none = cost_table(3, {}, 100, 10, 100, 100, 50);
  CHECK(none.c_l == Count(0));
}
