#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace persplab {

using Rng = std::mt19937_64;

/// Independent named streams derived from one experiment seed. Every
/// stochastic component draws from its own stream so that adding draws in
/// one place never shifts another.
enum class Stream : std::uint64_t {
  world = 1,
  perspectives = 2,
  demonstrations = 3,
  strategy = 4,
  learner = 5,
  noise = 6,
  bootstrap = 7,
  policies = 8,
};

inline Rng make_stream(std::uint64_t seed, Stream stream, std::uint64_t sub = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(sub),
                    static_cast<std::uint32_t>(sub >> 32)};
  return Rng(seq);
}

/// Uniform double in [0, 1) built from the top 53 bits, so results do not
/// depend on the standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n).
inline int uniform_index(Rng& rng, int n) {
  const auto bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return static_cast<int>(draw % bound);
}

/// Standard normal draw (Box-Muller, one value per call).
inline double standard_normal(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Draws an index from an unnormalized nonnegative weight vector.
inline int sample_categorical(Rng& rng, std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = uniform01(rng) * total;
  double acc = 0.0;
  int last_positive = 0;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

}  // namespace persplab
