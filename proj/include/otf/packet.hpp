#pragma once

#include "otf/gf.hpp"

#include <cstdint>
#include <variant>

namespace otf {

using seq_t = std::uint64_t;
using slot_t = std::uint64_t;

/// Inclusive range of source sequence numbers.
struct seq_range
{
  seq_t first = 0;
  seq_t last = 0;

  std::uint64_t size() const noexcept { return last - first + 1; }
  bool contains(seq_t s) const noexcept { return first <= s && s <= last; }

  bool operator==(const seq_range&) const = default;
};

struct source_packet
{
  seq_t seq = 0;
  gf::symbol_vector payload;
  slot_t sent_slot = 0;

  bool operator==(const source_packet&) const = default;
};

/// Linear combination of the sources in `window`. Coefficients are not
/// carried: both ends re-derive them from (coeff_seed, window).
struct repair_packet
{
  std::uint64_t repair_id = 0;
  seq_range window;
  std::uint64_t coeff_seed = 0;
  gf::symbol_vector payload;
  slot_t sent_slot = 0;

  bool operator==(const repair_packet&) const = default;
};

using packet = std::variant<source_packet, repair_packet>;

/// One coefficient per sequence number of `window`, uniform over [0, q).
/// SplitMix64 stream seeded with seed ^ (window.first * golden); each
/// coefficient is the top w bits of one output.
gf::symbol_vector expand_coefficients(const gf::field& f, std::uint64_t seed, seq_range window);

/// Coefficient seed of repair `repair_id` for an encoder keyed by `key`.
std::uint64_t coefficient_seed(std::uint64_t key, std::uint64_t repair_id) noexcept;

} // namespace otf
