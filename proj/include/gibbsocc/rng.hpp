#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace gibbsocc {

inline std::uint64_t splitmix64_step(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Seeded, stream-splittable generator. Identical (seed, stream) pairs
// reproduce identical draw sequences on every platform (mt19937_64 plus
// fully specified derived distributions; nothing implementation-defined).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), gen_(mix(seed, stream)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_u64() { return gen_(); }

  // uniform on the open interval (0,1)
  double uniform() { return (double(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  // standard exponential
  double exponential() { return -std::log(uniform()); }

  // Poisson by summing unit exponentials; exact and portable, O(mean) draws.
  long poisson(double mean) {
    if (!(mean >= 0)) throw std::domain_error("poisson: mean must be >= 0");
    long count = -1;
    double acc = 0;
    while (acc <= mean) {
      acc += exponential();
      ++count;
    }
    return count;
  }

  // index draw from an unnormalized cumulative weight vector
  std::size_t categorical_cdf(std::span<const double> cdf) {
    const double u = uniform() * cdf.back();
    std::size_t lo = 0, hi = cdf.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cdf[mid] < u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  }

 private:
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed;
    splitmix64_step(x);
    x ^= (stream + 1) * 0xD2B74407B1CE6E93ull;
    return splitmix64_step(x);
  }

  std::uint64_t seed_, stream_;
  std::mt19937_64 gen_;
};

}  // namespace gibbsocc
