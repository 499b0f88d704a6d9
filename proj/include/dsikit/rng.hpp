#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace dsikit {

/// Philox4x64-10 counter-based generator as in Random123.
/// Stateless: the output block is a pure function of (counter, key).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key);

/// Identifies an independent random stream. Estimators derive one key per
/// (seed, operation tag, target input, subset) so that draws are addressed by
/// sample index and never depend on thread scheduling.
struct StreamKey {
  PhiloxKey key{};
};

StreamKey stream_key(std::uint64_t seed, std::string_view tag,
                     std::uint64_t a = 0, std::uint64_t b = 0);

/// Standard normal variates for one sample index of a stream.
class NormalStream {
 public:
  NormalStream(StreamKey stream, std::uint64_t index);

  double next();

 private:
  void refill();

  StreamKey stream_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  std::array<double, 4> buffer_{};
  int pos_ = 4;
};

/// Uniform variates in the open interval (0, 1) for one sample index.
class UniformStream {
 public:
  UniformStream(StreamKey stream, std::uint64_t index);

  double next();

 private:
  StreamKey stream_;
  std::uint64_t index_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int pos_ = 4;
};

}  // namespace dsikit
