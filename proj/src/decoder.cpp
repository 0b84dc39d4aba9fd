#include "otf/decoder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

namespace otf {

decoder::decoder(gf::field f, std::size_t sz)
  : field_{f}
  , sz_{sz}
  , system_{std::move(f), sz}
{
  if (sz_ == 0)
    throw std::invalid_argument("payload size must be at least one symbol");
}

bool
decoder::known(seq_t seq) const noexcept
{
  if (seq < base_)
    return true;
  if (seq >= frontier_)
    return false;
  return store_[seq - base_].has_value();
}

const gf::symbol_vector*
decoder::payload(seq_t seq) const noexcept
{
  if (seq < base_ || seq >= frontier_)
    return nullptr;
  const auto& slot = store_[seq - base_];
  return slot ? &*slot : nullptr;
}

gf::op_counter
decoder::total_counter() const noexcept
{
  auto total = reduction_;
  total += system_.counter();
  return total;
}

std::vector<solve_record>
decoder::take_solves()
{
  return std::exchange(solves_, {});
}

void
decoder::extend_to(seq_t new_frontier)
{
  for (; frontier_ < new_frontier; ++frontier_)
  {
    store_.emplace_back();
    system_.add_unknown(frontier_);
  }
}

void
decoder::advance_contiguous()
{
  while (contiguous_ < frontier_ && store_[contiguous_ - base_].has_value())
    ++contiguous_;
}

void
decoder::emit(release r, slot_t slot, std::vector<decode_event>& events)
{
  if (r.payloads.empty())
    return;
  solves_.push_back({slot, r.m, r.payloads.size(), r.work});
  for (auto& [seq, value] : r.payloads)
  {
    store_[seq - base_] = value;
    events.push_back({seq, slot, true, std::move(value)});
  }
}

std::vector<decode_event>
decoder::on_source(const source_packet& pkt, slot_t slot)
{
  if (pkt.payload.size() != sz_)
    throw std::invalid_argument("source payload has " + std::to_string(pkt.payload.size()) +
                                " symbols, expected " + std::to_string(sz_));
  std::vector<decode_event> events;
  if (known(pkt.seq))
  {
    ++stats_.duplicates;
    return events;
  }

  if (pkt.seq >= frontier_)
  {
    extend_to(pkt.seq);
    store_.emplace_back(pkt.payload);
    ++frontier_;
    events.push_back({pkt.seq, slot, false, pkt.payload});
  }
  else
  {
    system_.substitute(pkt.seq, pkt.payload, reduction_);
    store_[pkt.seq - base_] = pkt.payload;
    events.push_back({pkt.seq, slot, false, pkt.payload});
    emit(system_.release_determined(), slot, events);
  }
  advance_contiguous();
  return events;
}

std::vector<decode_event>
decoder::on_repair(const repair_packet& pkt, slot_t slot)
{
  if (pkt.payload.size() != sz_)
    throw std::invalid_argument("repair payload has " + std::to_string(pkt.payload.size()) +
                                " symbols, expected " + std::to_string(sz_));
  if (pkt.window.last < pkt.window.first)
    throw std::invalid_argument("repair window is empty");

  std::vector<decode_event> events;
  if (pkt.window.first < base_)
  {
    ++stats_.stale_repairs;
    return events;
  }
  extend_to(pkt.window.last + 1);

  const auto coeffs = expand_coefficients(field_, pkt.coeff_seed, pkt.window);
  gf::symbol_vector rhs = pkt.payload;
  gf::symbol_vector row(system_.unknown_count(), 0);
  bool any = false;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
  {
    const seq_t seq = pkt.window.first + i;
    if (coeffs[i] == 0)
      continue;
    if (const auto& stored = store_[seq - base_])
    {
      field_.add_scaled(coeffs[i], *stored, rhs, reduction_);
    }
    else
    {
      row[*system_.column_of(seq)] = coeffs[i];
      any = true;
    }
  }

  if (!any || !system_.insert(std::move(row), std::move(rhs)))
  {
    ++stats_.dependent_repairs;
    return events;
  }
  emit(system_.release_determined(), slot, events);
  advance_contiguous();
  return events;
}

void
decoder::forget_below(seq_t first_unknown)
{
  const seq_t target = std::min(first_unknown, contiguous_);
  while (base_ < target)
  {
    store_.pop_front();
    ++base_;
  }
}

bool
recurrence_reset_check(const decoder& d, seq_t transmitted) noexcept
{
  return d.contiguous_known() >= transmitted;
}

} // namespace otf
