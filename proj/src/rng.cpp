#include "dsikit/rng.hpp"

#include <cmath>
#include <numbers>

namespace dsikit {
namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// 53 random bits mapped to (0, 1); never returns 0 so log() is safe.
inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

StreamKey stream_key(std::uint64_t seed, std::string_view tag, std::uint64_t a,
                     std::uint64_t b) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a(tag));
  const std::uint64_t k0 = splitmix64(h ^ splitmix64(a + 0x1234567ULL));
  const std::uint64_t k1 = splitmix64(k0 ^ splitmix64(b + 0x89ABCDEFULL));
  return StreamKey{{k0, k1}};
}

NormalStream::NormalStream(StreamKey stream, std::uint64_t index)
    : stream_(stream), index_(index) {}

void NormalStream::refill() {
  const PhiloxCounter bits = philox4x64({index_, block_++, 0, 0}, stream_.key);
  // Box-Muller on two uniform pairs.
  for (int pair = 0; pair < 2; ++pair) {
    const double u1 = to_open_unit(bits[2 * pair]);
    const double u2 = to_open_unit(bits[2 * pair + 1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    buffer_[2 * pair] = r * std::cos(theta);
    buffer_[2 * pair + 1] = r * std::sin(theta);
  }
  pos_ = 0;
}

double NormalStream::next() {
  if (pos_ == 4) refill();
  return buffer_[pos_++];
}

UniformStream::UniformStream(StreamKey stream, std::uint64_t index)
    : stream_(stream), index_(index) {}

double UniformStream::next() {
  if (pos_ == 4) {
    buffer_ = philox4x64({index_, block_++, 1, 0}, stream_.key);
    pos_ = 0;
  }
  return to_open_unit(buffer_[pos_++]);
}

}  // namespace dsikit
