#pragma once

#include <cstdint>
#include <random>

namespace otf {

/// SplitMix64 (Steele, Lea, Flood 2014). Used wherever a stream must be
/// reproducible across implementations: coefficient expansion, payload
/// generation and substream seeding.
///
///   state += 0x9E3779B97F4A7C15
///   z = state
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
class splitmix64
{
public:
  static constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

  explicit constexpr splitmix64(std::uint64_t seed) noexcept : state_{seed} {}

  constexpr std::uint64_t
  operator()() noexcept
  {
    state_ += golden;
    return mix(state_);
  }

  /// The output finalizer on its own; a good 64-bit hash.
  static constexpr std::uint64_t
  mix(std::uint64_t z) noexcept
  {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t state_;
};

/// Independent seed for substream `stream` of `seed`.
constexpr std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept
{
  return splitmix64::mix(seed + splitmix64::golden * (stream + 1));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double
unit_double(std::mt19937_64& gen)
{
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by multiply-shift; bias is below 2^-64 * bound.
inline std::uint64_t
bounded(std::mt19937_64& gen, std::uint64_t bound)
{
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(gen()) * bound) >> 64);
}

} // namespace otf
