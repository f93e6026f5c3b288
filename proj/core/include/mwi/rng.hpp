#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mwi {

// Deterministic random source: mt19937_64 with hand-rolled uniform and
// normal transforms, so streams are bit-identical across standard
// libraries (std::uniform_real_distribution and std::normal_distribution
// are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller; the second deviate of each pair is
  // cached so draws consume the engine in a fixed pattern.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi_v<double> * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Fisher-Yates permutation of 0..n-1.
  template <typename IndexVector>
  void shuffle(IndexVector& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Named substreams derived from one run seed; keeps design sampling, swarm
// kinematics, surrogate fitting, and noise independent of each other.
namespace rng_stream {
inline constexpr std::uint64_t design = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t swarm = 0xD1B54A32D192ED03ull;
inline constexpr std::uint64_t fit = 0x94D049BB133111EBull;
inline constexpr std::uint64_t noise = 0xBF58476D1CE4E5B9ull;
}  // namespace rng_stream

inline Rng make_stream(std::uint64_t seed, std::uint64_t stream_tag) {
  return Rng(seed ^ stream_tag);
}

}  // namespace mwi
