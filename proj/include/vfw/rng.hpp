#pragma once
#include <cstdint>
#include <random>

#include "vfw/vector3.hpp"

namespace vfw {

// Deterministic random stream.  The raw engine is std::mt19937_64; the
// variate transforms are written out here (instead of using the standard
// distribution objects) so that the byte stream of results is pinned down by
// this file alone, independent of the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller, one cached value.
  double normal();

  // Uniform direction on the unit sphere.
  Vec3 unit_vector();

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace vfw
