// SPDX-License-Identifier: Apache-2.0
//
// ccss -- cooperative spectrum sensing toolkit
#ifndef CCSS_RNG_HPP_
#define CCSS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace ccss {
namespace rng {

namespace detail {

inline uint64_t rotl64(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

// Threefry-2x64, 20 rounds.
inline void threefry2x64(uint64_t k0, uint64_t k1, uint64_t c0, uint64_t c1,
                         uint64_t* out0, uint64_t* out1) {
  static constexpr int R[8] = {16, 42, 12, 31, 16, 32, 24, 21};
  uint64_t ks[3] = {k0, k1, 0x1BD11BDAA9FC1A22ull ^ k0 ^ k1};
  uint64_t x0 = c0 + ks[0];
  uint64_t x1 = c1 + ks[1];
  for (int r = 0; r < 20; ++r) {
    x0 += x1;
    x1 = rotl64(x1, R[r % 8]);
    x1 ^= x0;
    if (r % 4 == 3) {
      int s = r / 4 + 1;
      x0 += ks[s % 3];
      x1 += ks[(s + 1) % 3] + static_cast<uint64_t>(s);
    }
  }
  *out0 = x0;
  *out1 = x1;
}

}  // namespace detail

/// Counter-based random stream. A stream is fully determined by
/// (seed, stream_id, block) -- draws depend only on those values and the
/// number of values consumed, so trials partition across workers without
/// coordination.
class Stream {
 public:
  Stream(uint64_t seed, uint64_t stream_id, uint64_t block)
      : key0_(seed), key1_(stream_id), hi_(block) {}

  uint64_t next_u64() {
    if (have_) {
      have_ = false;
      return second_;
    }
    uint64_t a, b;
    detail::threefry2x64(key0_, key1_, hi_, lo_++, &a, &b);
    second_ = b;
    have_ = true;
    return a;
  }

  /// Uniform on the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_normal_) {
      have_normal_ = false;
      return second_normal_;
    }
    double u1 = uniform01(), u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    second_normal_ = r * std::sin(a);
    have_normal_ = true;
    return r * std::cos(a);
  }

  double exponential(double scale) { return -scale * std::log(uniform01()); }

  /// Gamma(shape, scale), Marsaglia-Tsang; shape < 1 via the boost trick.
  double gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
      throw std::domain_error("rng: gamma requires shape, scale > 0");
    if (shape < 1.0) {
      double u = uniform01();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
  }

 private:
  uint64_t key0_, key1_, hi_;
  uint64_t lo_ = 0;
  uint64_t second_ = 0;
  bool have_ = false;
  double second_normal_ = 0.0;
  bool have_normal_ = false;
};

/// Stream for (experiment seed, logical substream, trial index).
inline Stream make_stream(uint64_t seed, uint64_t stream_id, uint64_t trial) {
  return Stream(seed, stream_id, trial);
}

}  // namespace rng
}  // namespace ccss

#endif  // CCSS_RNG_HPP_
