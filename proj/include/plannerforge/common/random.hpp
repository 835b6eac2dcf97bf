// SPDX-License-Identifier: BSD-3-Clause
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace plannerforge
{

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `indices...` under `base`. Order-sensitive, pure.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices) noexcept
{
  std::uint64_t s = mix_seed(base);
  for (std::uint64_t i : indices)
    s = mix_seed(s ^ mix_seed(i + 0x632BE59BD9B4E019ULL));
  return s;
}

/// Seedable, splittable generator. Draws are portable across standard
/// libraries (no std distributions involved).
class Rng
{
public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), engine_(mix_seed(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Independent child stream; does not advance this generator.
  Rng split(std::uint64_t index) const { return Rng(derive_seed(seed_, {index})); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(span == 0 ? engine_() : engine_() % span);
  }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace plannerforge
