#pragma once

// Portable seeded generator. The standard distributions are
// implementation-defined, so construction outputs that must be reproducible
// across platforms draw from this instead.
//
// Algorithm: xoshiro256** state seeded through splitmix64; uniforms use the
// top 53 bits; normals use Box-Muller (both outputs consumed in order).

#include <cstdint>
#include <optional>

#include "framekit/numerics.hpp"

namespace framekit {

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // [0, 1)
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform in [0, n).
  std::uint64_t below(std::uint64_t n);

  // Entries ~ N(0,1); complex entries get independent real/imag parts.
  Vector normal_vector(std::size_t n, Field field);

 private:
  std::uint64_t s_[4];
  std::optional<double> spare_;
};

}  // namespace framekit
