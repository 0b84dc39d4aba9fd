#include "otf/encoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace otf {

encoder::encoder(gf::field f, std::size_t sz, std::uint64_t coeff_key)
  : field_{std::move(f)}
  , sz_{sz}
  , coeff_key_{coeff_key}
{
  if (sz_ == 0)
    throw std::invalid_argument("payload size must be at least one symbol");
}

source_packet
encoder::push_source(gf::symbol_vector payload, slot_t slot)
{
  if (payload.size() != sz_)
    throw std::invalid_argument("source payload has " + std::to_string(payload.size()) +
                                " symbols, expected " + std::to_string(sz_));
  if (!std::all_of(payload.begin(), payload.end(), [&](auto s) { return field_.contains(s); }))
    throw std::invalid_argument("source payload holds a symbol outside the field");
  buffer_.push_back(payload);
  return source_packet{next_seq_++, std::move(payload), slot};
}

std::optional<repair_packet>
encoder::make_repair(slot_t slot)
{
  if (window_empty())
    return std::nullopt;
  repair_packet repair;
  repair.repair_id = next_repair_id_++;
  repair.window = {anchor_, next_seq_ - 1};
  repair.coeff_seed = coefficient_seed(coeff_key_, repair.repair_id);
  repair.sent_slot = slot;
  repair.payload.assign(sz_, 0);

  const auto coeffs = expand_coefficients(field_, repair.coeff_seed, repair.window);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    field_.add_scaled(coeffs[i], buffer_[i], repair.payload, counter_);
  return repair;
}

void
encoder::acknowledge(seq_t first_unknown)
{
  if (first_unknown > next_seq_)
    throw std::invalid_argument("acknowledgment of unsent sequence number " +
                                std::to_string(first_unknown - 1));
  while (anchor_ < first_unknown)
  {
    buffer_.pop_front();
    ++anchor_;
  }
}

const gf::symbol_vector&
encoder::buffered(seq_t seq) const
{
  if (seq < anchor_ || seq >= next_seq_)
    throw std::out_of_range("sequence number " + std::to_string(seq) + " is not in the window");
  return buffer_[seq - anchor_];
}

} // namespace otf
