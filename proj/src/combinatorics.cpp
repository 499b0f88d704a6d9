#include "dsikit/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <boost/integer/common_factor.hpp>

#include "dsikit/error.hpp"

namespace dsikit {
namespace {

template <class F>
auto checked(F&& f) {
  try {
    return f();
  } catch (const std::overflow_error& e) {
    throw Error(ErrorCode::kOverflow,
                std::string("exact count overflowed 128 bits: ") + e.what());
  } catch (const std::range_error& e) {
    throw Error(ErrorCode::kOverflow,
                std::string("exact count overflowed 128 bits: ") + e.what());
  }
}

Count gcd(Count a, Count b) {
  while (b != 0) {
    Count t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Count lcm(const Count& a, const Count& b) {
  if (a == 0 || b == 0) return 0;
  return checked([&] { return (a / gcd(a, b)) * b; });
}

}  // namespace

Count binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  return checked([&] {
    Count r = 1;
    // r * (n - i) / (i + 1) stays integral at each step.
    for (unsigned i = 0; i < k; ++i) {
      r = r * Count(n - i);
      r /= Count(i + 1);
    }
    return r;
  });
}

Count factorial(unsigned n) {
  return checked([&] {
    Count r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= Count(i);
    return r;
  });
}

SymmetricPlan symmetric_plan(std::span<const int> block_sizes) {
  SymmetricPlan plan;
  plan.block_sizes.assign(block_sizes.begin(), block_sizes.end());
  Count r = 1;
  for (int dk : block_sizes) {
    if (dk < 2) {
      throw Error(ErrorCode::kBlockTooSmall,
                  "dependent blocks need at least 2 inputs, got " + std::to_string(dk));
    }
    const unsigned n = static_cast<unsigned>(dk);
    plan.r0_per_block.push_back(
        checked([&] { return Count(n) * binomial(n - 1, (n - 1) / 2); }));
    for (unsigned p = 1; p <= n; ++p) {
      r = lcm(r, checked([&] { return Count(n) * binomial(n - 1, p - 1); }));
    }
  }
  plan.r_min_s = block_sizes.empty() ? Count(0) : r;
  for (int dk : block_sizes) {
    const unsigned n = static_cast<unsigned>(dk);
    std::vector<Count> row;
    for (unsigned p = 1; p <= n; ++p) {
      row.push_back(plan.r_min_s / (Count(n) * binomial(n - 1, p - 1)));
    }
    plan.lambda.push_back(std::move(row));
  }
  return plan;
}

ShapleyWeight shapley_weight(int d, int s) {
  if (d < 1 || s < 0 || s > d - 1) {
    throw Error(ErrorCode::kOutOfRange, "shapley_weight needs 0 <= s <= d-1, got d=" +
                                            std::to_string(d) + " s=" + std::to_string(s));
  }
  const Count denom =
      checked([&] { return Count(d) * binomial(static_cast<unsigned>(d - 1),
                                                static_cast<unsigned>(s)); });
  ShapleyWeight w;
  w.exact = Rational(1) / Rational(boost::multiprecision::cpp_int(denom));
  w.value = 1.0 / static_cast<double>(denom);
  return w;
}

std::vector<std::vector<int>> subsets_excluding(std::span<const int> ground, int j) {
  if (static_cast<int>(ground.size()) > kMaxSubsetGround) {
    throw Error(ErrorCode::kSubsetTooLarge,
                "subset enumeration is capped at " + std::to_string(kMaxSubsetGround) +
                    " elements, got " + std::to_string(ground.size()));
  }
  std::vector<int> rest;
  bool found = false;
  for (int g : ground) {
    if (g == j) {
      found = true;
    } else {
      rest.push_back(g);
    }
  }
  if (!found) {
    throw Error(ErrorCode::kIndexNotInGround,
                "index " + std::to_string(j) + " is not in the ground set");
  }
  const int n = static_cast<int>(rest.size());
  std::vector<std::vector<int>> out;
  out.reserve(std::size_t{1} << n);
  // Size-major, then lexicographic over positions: walk all k-combinations.
  for (int k = 0; k <= n; ++k) {
    std::vector<int> pos(k);
    for (int i = 0; i < k; ++i) pos[i] = i;
    while (true) {
      std::vector<int> subset(k);
      for (int i = 0; i < k; ++i) subset[i] = rest[pos[i]];
      out.push_back(std::move(subset));
      int i = k - 1;
      while (i >= 0 && pos[i] == n - k + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int t = i + 1; t < k; ++t) pos[t] = pos[t - 1] + 1;
    }
  }
  return out;
}

HockeyStickResult hockey_stick_check(int d, int d_star, int u_size) {
  if (d_star < 1 || d_star > d || u_size < 0 || u_size > d_star - 1) {
    throw Error(ErrorCode::kOutOfRange,
                "hockey_stick_check needs 1 <= d* <= d and 0 <= |u| <= d*-1");
  }
  const auto ud = static_cast<unsigned>(d);
  const auto us = static_cast<unsigned>(d_star);
  const auto uu = static_cast<unsigned>(u_size);
  double sum = 0.0;
  for (unsigned m = 0; m <= ud - us; ++m) {
    sum += static_cast<double>(binomial(ud - us, m)) *
           static_cast<double>(binomial(us - 1, uu)) /
           static_cast<double>(binomial(ud - 1, uu + m));
  }
  return {sum, static_cast<double>(d) / static_cast<double>(d_star)};
}

CostTable cost_table(int d, std::span<const int> dependent_blocks, std::uint64_t m,
                     std::uint64_t n_i, std::uint64_t n_0, std::uint64_t n_v,
                     std::uint64_t n_perm) {
  if (d < 1) throw Error(ErrorCode::kOutOfRange, "cost_table needs d >= 1");
  int total = 0;
  CostTable t;
  t.d = d;
  for (int b : dependent_blocks) {
    if (b < 2) {
      throw Error(ErrorCode::kBlockTooSmall,
                  "dependent blocks need at least 2 inputs, got " + std::to_string(b));
    }
    total += b;
    t.d_max = std::max(t.d_max, b);
  }
  if (total > d) {
    throw Error(ErrorCode::kOutOfRange, "block sizes sum to more than d");
  }
  checked([&] {
    if (t.d_max > 0) {
      const auto dm = static_cast<unsigned>(t.d_max);
      t.c_l = Count(4) * Count(m) * Count(dm) * binomial(dm - 1, (dm - 1) / 2);
    }
    const Count loops = Count(n_i) * Count(n_0);
    t.c = loops * factorial(static_cast<unsigned>(d)) * Count(d - 1) + Count(n_v);
    t.c_prime = loops * Count(n_perm) * Count(d - 1) + Count(n_v);
    return 0;
  });
  t.ratio_cl_over_c = static_cast<double>(t.c_l) / static_cast<double>(t.c);
  return t;
}

std::string to_string(const Count& c) { return c.str(); }

}  // namespace dsikit
