#pragma once

#include <cstdint>
#include <random>

#include "bimero/projective.hpp"

namespace bimero {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent deterministic substream `stream` of an experiment seed.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed270b7f4a7c15ULL)));
}

/// Standard complex Gaussian vector; normalized it is Fubini-Study uniform on P^2.
inline Vec3 gaussian_vec3(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
}

inline ProjectivePoint uniform_point(std::mt19937_64& rng) { return ProjectivePoint(gaussian_vec3(rng)); }

}  // namespace bimero
