#pragma once

#include "otf/gf.hpp"
#include "otf/packet.hpp"

#include <deque>
#include <optional>

namespace otf {

/// Sender side. Every repair combines the whole coding window
/// [window_anchor, next_seq); the anchor moves only on acknowledgment.
class encoder
{
public:
  encoder(gf::field f, std::size_t sz, std::uint64_t coeff_key = 0);

  /// Stamps the next sequence number and keeps the payload in the window.
  /// Throws std::invalid_argument if the payload is not sz symbols or holds
  /// values outside the field.
  source_packet push_source(gf::symbol_vector payload, slot_t slot);

  /// Nothing when the window is empty.
  std::optional<repair_packet> make_repair(slot_t slot);

  /// Everything below `first_unknown` is decoded at the receiver. Stale
  /// acknowledgments are ignored; acknowledging unsent packets throws.
  void acknowledge(seq_t first_unknown);

  /// Same as acknowledge(decoded_up_to + 1).
  void advance_window(seq_t decoded_up_to) { acknowledge(decoded_up_to + 1); }

  seq_t next_seq() const noexcept { return next_seq_; }
  seq_t window_anchor() const noexcept { return anchor_; }
  bool window_empty() const noexcept { return anchor_ == next_seq_; }
  std::size_t window_size() const noexcept { return buffer_.size(); }
  std::uint64_t next_repair_id() const noexcept { return next_repair_id_; }

  /// Payload of a sequence number still in the window.
  const gf::symbol_vector& buffered(seq_t seq) const;

  const gf::field& field() const noexcept { return field_; }
  std::size_t payload_size() const noexcept { return sz_; }
  const gf::op_counter& counter() const noexcept { return counter_; }

private:
  gf::field field_;
  std::size_t sz_;
  std::uint64_t coeff_key_;
  seq_t next_seq_ = 0;
  seq_t anchor_ = 0;
  std::uint64_t next_repair_id_ = 0;
  std::deque<gf::symbol_vector> buffer_; // payloads of [anchor_, next_seq_)
  gf::op_counter counter_;
};

} // namespace otf
