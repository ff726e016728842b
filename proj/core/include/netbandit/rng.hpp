#pragma once

// Deterministic random streams. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the distribution shapes below are spelled
// out here because std::*_distribution algorithms are implementation-defined
// and results must reproduce bit-for-bit across standard libraries.
//
// Replication r of a run with base seed s draws from an independent stream
// seeded with splitmix64(s + (r+1) * golden), so a result never depends on how
// replications are scheduled across workers.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace netbandit {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t child_seed(std::uint64_t base_seed, std::uint64_t index) {
  return splitmix64(base_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n) by rejection on the top bits.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: empty range");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Rademacher draw with mean f in [-1, 1]: +1 w.p. (1+f)/2, else -1.
  double rademacher(double f) { return uniform() < 0.5 * (1.0 + f) ? 1.0 : -1.0; }

  // Standard normal via Box-Muller; caches the second deviate of each pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Index draw proportional to weights (inverse CDF scan).
  std::size_t discrete(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0 || !std::isfinite(w)) throw std::invalid_argument("discrete: bad weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("discrete: zero total weight");
    double u = uniform() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace netbandit
