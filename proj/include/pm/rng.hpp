// Deterministic randomness. All sampling goes through this wrapper so runs
// replay bit-for-bit from a seed on any platform: std::mt19937_64 has a
// portable bit stream, and the derived draws below avoid the
// implementation-defined std::*_distribution classes.
#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace pm {

// splitmix64; used to derive independent stream seeds from (seed, stream id).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int n) {  // uniform on {0, ..., n-1}
    if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
    int v = static_cast<int>(uniform01() * n);
    return v < n ? v : n - 1;
  }

  // Index sampled from an unnormalized nonnegative weight vector by inverting
  // the cumulative sum; fp leftovers fall into the last positive-weight bin.
  int categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("categorical: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("categorical: zero total weight");
    double u = uniform01() * total;
    double acc = 0.0;
    int last = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      if (weights[k] <= 0.0) continue;
      acc += weights[k];
      last = static_cast<int>(k);
      if (u < acc) return last;
    }
    return last;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pm
