#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hubbert {

/// SplitMix64 finalizer. Used to derive independent, well-mixed seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of substream `stream` under master seed `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded generator used everywhere randomness is needed.
///
/// Engine is mt19937_64. A run keyed by (seed, stream) is reproducible within a
/// build; distinct streams are statistically independent, so parallel workers
/// each take their own stream and results do not depend on scheduling.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t seed, std::uint64_t stream) : engine_(substream_seed(seed, stream)) {}

  /// Uniform draw in the open interval (0, 1).
  double uniform_open() {
    for (;;) {
      const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// Uniform draw in the open interval (lo, hi). Requires lo < hi.
  double uniform(double lo, double hi) {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double x = lo + (hi - lo) * uniform_open();
      if (x > lo && x < hi) return x;
    }
    // Interval too narrow to hold an interior draw; the nearest interior double.
    return std::nextafter(lo, hi);
  }

  double normal() { return normal_(engine_); }

  engine_type& engine() noexcept { return engine_; }

 private:
  engine_type engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace hubbert
