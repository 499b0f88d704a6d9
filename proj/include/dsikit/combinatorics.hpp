#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dsikit {

/// Exact count type. Arithmetic overflow throws Error(kOverflow).
using Count = boost::multiprecision::checked_uint128_t;
using Rational = boost::multiprecision::cpp_rational;

/// Largest ground set accepted by subset enumeration.
inline constexpr int kMaxSubsetGround = 20;

Count binomial(unsigned n, unsigned k);
Count factorial(unsigned n);

/// Repetition design for a tuple of dependent blocks: R_{0,k}, the minimal
/// symmetric count R_min^s and the per-position repetition table lambda.
struct SymmetricPlan {
  std::vector<int> block_sizes;
  std::vector<Count> r0_per_block;
  Count r_min_s = 0;
  // lambda[k][p - 1] for block k and position p in 1..d_k.
  std::vector<std::vector<Count>> lambda;
};

SymmetricPlan symmetric_plan(std::span<const int> block_sizes);

struct ShapleyWeight {
  Rational exact;
  double value = 0.0;
};

/// 1 / (d * binom(d - 1, s)).
ShapleyWeight shapley_weight(int d, int s);

/// All subsets of ground \ {j}, ordered by size then lexicographically by
/// position in `ground`. `ground` must be strictly increasing.
std::vector<std::vector<int>> subsets_excluding(std::span<const int> ground, int j);

struct HockeyStickResult {
  double computed = 0.0;
  double expected = 0.0;
};

/// Direct summation of
///   sum_{m=0}^{d-d*} binom(d-d*, m) binom(d*-1, s) / binom(d-1, s+m)
/// against its closed form d / d*.
HockeyStickResult hockey_stick_check(int d, int d_star, int u_size);

/// Model-run counts: C_l for all main/total DSIs, C for direct Shapley
/// effects over all permutations and C' for n_perm sampled permutations.
struct CostTable {
  int d = 0;
  int d_max = 0;  // largest dependent block; 0 when there is none
  Count c_l = 0;
  Count c = 0;
  Count c_prime = 0;
  double ratio_cl_over_c = 0.0;
};

CostTable cost_table(int d, std::span<const int> dependent_blocks, std::uint64_t m,
                     std::uint64_t n_i, std::uint64_t n_0, std::uint64_t n_v,
                     std::uint64_t n_perm);

/// Decimal rendering of an exact count.
std::string to_string(const Count& c);

}  // namespace dsikit
