#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace pbdpp {

/// Seed plus stream id. Identical (seed, stream) pairs reproduce identical
/// draw sequences for identical request sequences.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministically derive an independent child stream. Used to hand
/// each experiment row / replicate its own stream.
inline RngSeed derive_stream(RngSeed base, std::uint64_t salt_a, std::uint64_t salt_b = 0) {
  RngSeed out;
  out.seed = detail::splitmix64(base.seed ^ detail::splitmix64(salt_a));
  out.stream = detail::splitmix64(base.stream ^ detail::splitmix64(salt_b ^ (salt_a << 1)));
  return out;
}

/// Deterministic random source. All transformations are built on the raw
/// 64-bit engine output so that draw sequences do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(RngSeed s) : origin_(s) {
    std::seed_seq seq{s.seed & 0xffffffffULL, s.seed >> 32, s.stream & 0xffffffffULL, s.stream >> 32};
    engine_.seed(seq);
  }

  RngSeed origin() const { return origin_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double exponential(double rate) {
    if (rate <= 0) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log1p(-uniform01()) / rate;
  }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Exact Poisson draw. Knuth multiplication for small means; larger means
  /// are split by infinite divisibility, keeping every step exact.
  long poisson(double mean) {
    if (mean < 0) throw std::invalid_argument("poisson: mean must be nonnegative");
    if (mean == 0) return 0;
    long total = 0;
    while (mean > 30.0) {
      double half = mean / 2;
      total += poisson_small(half);
      mean -= half;
    }
    return total + poisson_small(mean);
  }

  /// Index draw from an unnormalized weight vector.
  std::size_t categorical(std::span<const double> weights) {
    double total = 0;
    for (double w : weights) total += w;
    double u = uniform01() * total;
    double acc = 0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (u < acc) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

 private:
  long poisson_small(double mean) {
    const double threshold = std::exp(-mean);
    long k = 0;
    double prod = uniform01();
    while (prod > threshold) {
      ++k;
      prod *= uniform01();
    }
    return k;
  }

  std::mt19937_64 engine_;
  RngSeed origin_;
};

}  // namespace pbdpp
