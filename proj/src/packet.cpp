#include "otf/packet.hpp"

#include "otf/rng.hpp"

namespace otf {

gf::symbol_vector
expand_coefficients(const gf::field& f, std::uint64_t seed, seq_range window)
{
  splitmix64 stream{seed ^ (window.first * splitmix64::golden)};
  const unsigned shift = 64 - f.degree();
  gf::symbol_vector coeffs(window.size());
  for (auto& c : coeffs)
    c = static_cast<gf::symbol>(stream() >> shift);
  return coeffs;
}

std::uint64_t
coefficient_seed(std::uint64_t key, std::uint64_t repair_id) noexcept
{
  return splitmix64::mix(key + repair_id * splitmix64::golden);
}

} // namespace otf
