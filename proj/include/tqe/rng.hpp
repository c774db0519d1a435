#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace tqe {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Deterministic sub-stream seed: the same (base, tag) always yields the same
/// seed, independent of evaluation order or thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
  std::uint64_t s = base ^ (0x9e3779b97f4a7c15ull * (tag + 0x632be59bd9b4e019ull));
  return splitmix64(s);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag1, std::uint64_t tag2) {
  return derive_seed(derive_seed(base, tag1), tag2);
}

/// mt19937_64 with explicit bit-to-double conversions so streams are
/// reproducible across standard libraries (std::*_distribution is not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform on [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1); safe as a log argument.
  double uniform_pos() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t bits() { return eng_(); }

  /// Standard normal via Box-Muller (pairwise, second value cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::complex<double> cgaussian() {
    double re = gaussian();
    double im = gaussian();
    return {re, im};
  }

  /// Uniform direction on S^{d-1} (normalized Gaussian vector).
  void sphere(int d, double* out) {
    while (true) {
      double nrm2 = 0.0;
      for (int i = 0; i < d; ++i) {
        out[i] = gaussian();
        nrm2 += out[i] * out[i];
      }
      if (nrm2 > 1e-24) {
        double inv = 1.0 / std::sqrt(nrm2);
        for (int i = 0; i < d; ++i) out[i] *= inv;
        return;
      }
    }
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace tqe
