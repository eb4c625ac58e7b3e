#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace gamescape {

inline constexpr const char* kVersion = "0.1.0";

/// Raised when inputs violate a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails to reach its stated tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic random source. Samplers are spelled out on top of
/// mt19937_64 so results do not depend on standard-library distribution
/// internals; identical seeds give identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Unbiased integer in [0, n).
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw ValidationError("uniform_int: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Uniform Dirichlet(1,...,1) point on the k-simplex.
  std::vector<double> dirichlet_uniform(int k) {
    std::vector<double> weights(static_cast<std::size_t>(k));
    double total = 0.0;
    for (auto& w : weights) {
      w = -std::log(1.0 - uniform01());
      total += w;
    }
    for (auto& w : weights) w /= total;
    return weights;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(uniform_int(static_cast<std::uint64_t>(i) + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    return perm;
  }

  /// k distinct indices from [0, n), ascending.
  std::vector<int> sample_without_replacement(int n, int k) {
    if (k > n) throw ValidationError("sample_without_replacement: k > n");
    auto perm = permutation(n);
    perm.resize(static_cast<std::size_t>(k));
    std::sort(perm.begin(), perm.end());
    return perm;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// FNV-1a, used for input digests in run manifests.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

}  // namespace gamescape
