#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace frugal {

// Every stochastic component in this library draws from Rng so that a seed
// fully determines all outputs across platforms and releases. The standard
// library's distribution objects are implementation-defined and must not be
// used; the transforms below are frozen. The identifier is recorded in
// synthetic-dataset metadata and is part of the file format.
inline constexpr const char* kRngAlgorithm =
    "splitmix64-substream/mt19937_64/box-muller";

uint64_t splitmix64(uint64_t& state);

/// Derives an independent stream seed from a base seed and a purpose tag.
uint64_t substream_seed(uint64_t seed, const std::string& tag);

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t next() { return gen_(); }

  /// Uniform double in [0,1), 53-bit resolution.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller, pair-cached.
  double normal();

  /// Uniform integer in [0,n). n must be > 0.
  uint64_t bounded(uint64_t n) { return next() % n; }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(bounded(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace frugal
