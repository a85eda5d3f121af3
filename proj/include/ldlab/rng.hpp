#pragma once

#include <cstdint>
#include <random>

namespace ldlab {

using Rng = std::mt19937_64;

/// Independent generator for logical stream `stream` of run `seed`.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream),
                    std::uint32_t(stream >> 32), 0x6c64u};
  return Rng(seq);
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return double(rng() >> 11) * 0x1.0p-53; }

/// Point uniform in the unit disk (rejection from the square). Both
/// coordinates carry 32 random bits; r2 = x^2 + y^2 is in (0, 1).
struct DiskPoint {
  double x, y, r2;
};

inline DiskPoint uniform_disk(Rng& rng) {
  for (;;) {
    const std::uint64_t bits = rng();
    const double x = double(std::int32_t(std::uint32_t(bits))) * 0x1.0p-31;
    const double y = double(std::int32_t(std::uint32_t(bits >> 32))) * 0x1.0p-31;
    const double r2 = x * x + y * y;
    if (r2 < 1.0 && r2 > 0.0) return {x, y, r2};
  }
}

/// cos of a uniform angle: for (x, y) uniform in the disk with polar angle phi,
/// (x^2 - y^2)/r^2 = cos(2 phi) and 2 phi is uniform modulo 2 pi.
inline double uniform_angle_cosine(Rng& rng) {
  const DiskPoint p = uniform_disk(rng);
  return (p.x * p.x - p.y * p.y) / p.r2;
}

}  // namespace ldlab
