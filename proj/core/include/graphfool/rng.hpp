#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphfool {

/// Seeded random source with hand-rolled draws.
///
/// std::mt19937_64 output is fixed by the standard, but the standard
/// distributions are not; rolling the mapping ourselves keeps every seeded
/// run bit-reproducible across compilers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). n must be > 0.
  std::size_t next_index(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform double in [-limit, limit].
  double next_symmetric(double limit) {
    return (2.0 * next_double() - 1.0) * limit;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

  /// Sample k distinct elements from v (order randomized). k may exceed
  /// v.size(), in which case all elements are returned.
  template <typename T>
  std::vector<T> sample(std::vector<T> v, std::size_t k) {
    shuffle(v);
    if (k < v.size()) v.resize(k);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphfool
