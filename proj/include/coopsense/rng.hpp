/// Deterministic random streams. The engine (std::mt19937_64) has a
/// standard-pinned output sequence and the normal generator is a fixed
/// Box-Muller transform, so draws are bit-identical across toolchains;
/// std::normal_distribution would not be.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace coopsense {

/// splitmix64 finalizer; good avalanche for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a) { return splitmix64(a); }

/// Folds any number of labels into one well-mixed substream seed.
template <class... Rest>
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, Rest... rest) {
  std::uint64_t h = splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ull +
                                    (a << 6) + (a >> 2)));
  return mix_seed(h, rest...);
}

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Circularly symmetric complex normal with total variance `variance`.
  std::complex<double> circular_normal(double variance) {
    const double s = std::sqrt(0.5 * variance);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace coopsense
