#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace swarmsense {

// Deterministic splitmix64 generator. Used instead of <random> engines plus
// distributions because distribution algorithms are implementation-defined,
// and replays must be bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream for (seed, domain, index), e.g. one per agent.
  static Rng stream(std::uint64_t seed, std::uint64_t domain, std::uint64_t index = 0) {
    Rng r(seed);
    std::uint64_t s = r.next() ^ (0x9e3779b97f4a7c15ULL * (domain + 1));
    Rng r2(s);
    return Rng(r2.next() ^ (0xbf58476d1ce4e5b9ULL * (index + 1)));
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n), n > 0. Rejection sampling.
  std::uint64_t below(std::uint64_t n) {
    assert(n > 0);
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller, caching the second deviate.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    double u2 = unit();
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Substream domains, so different pipeline stages never share a stream.
namespace rng_domain {
inline constexpr std::uint64_t kPlans = 1;
inline constexpr std::uint64_t kTree = 2;
inline constexpr std::uint64_t kSim = 3;
}  // namespace rng_domain

}  // namespace swarmsense
