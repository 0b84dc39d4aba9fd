#pragma once

#include "otf/gf.hpp"
#include "otf/linear_system.hpp"
#include "otf/packet.hpp"

#include <deque>
#include <optional>
#include <vector>

namespace otf {

/// A source packet became known at `decode_slot`, either by direct
/// reception or by recovery from repairs.
struct decode_event
{
  seq_t seq = 0;
  slot_t decode_slot = 0;
  bool recovered = false;
  gf::symbol_vector payload;
};

struct solve_record
{
  slot_t slot = 0;
  std::size_t m = 0;        // system dimension the work was done on
  std::size_t released = 0; // unknowns recovered by this solve
  gf::op_counter work;

  bool operator==(const solve_record&) const = default;
};

struct decoder_stats
{
  std::uint64_t duplicates = 0;
  std::uint64_t stale_repairs = 0;
  std::uint64_t dependent_repairs = 0;

  bool operator==(const decoder_stats&) const = default;
};

/// Receiver side. Repairs are reduced against the known sources on arrival
/// and the residual joins the linear system; unknowns are released the
/// moment the system determines them.
class decoder
{
public:
  decoder(gf::field f, std::size_t sz);

  std::vector<decode_event> on_source(const source_packet& pkt, slot_t slot);
  std::vector<decode_event> on_repair(const repair_packet& pkt, slot_t slot);

  /// Payloads below `first_unknown` will never be referenced again (the
  /// sender has been told they are decoded). Never drops unknowns.
  void forget_below(seq_t first_unknown);

  /// Every sequence number below this is known.
  seq_t contiguous_known() const noexcept { return contiguous_; }
  /// One past the highest sequence number seen or referenced.
  seq_t frontier() const noexcept { return frontier_; }
  /// Payloads below this have been forgotten.
  seq_t horizon() const noexcept { return base_; }

  bool known(seq_t seq) const noexcept;
  /// Stored payload of a known sequence number above the horizon.
  const gf::symbol_vector* payload(seq_t seq) const noexcept;

  /// No gap below the frontier, from the decoder's own point of view.
  bool in_sync() const noexcept { return contiguous_ == frontier_; }

  const linear_system& system() const noexcept { return system_; }
  const decoder_stats& stats() const noexcept { return stats_; }

  /// Multiplications spent subtracting known sources from repairs.
  const gf::op_counter& reduction_counter() const noexcept { return reduction_; }
  /// Multiplications spent in elimination.
  const gf::op_counter& elimination_counter() const noexcept { return system_.counter(); }
  gf::op_counter total_counter() const noexcept;

  /// Solve records accumulated since the last call.
  std::vector<solve_record> take_solves();

private:
  void extend_to(seq_t new_frontier);
  void emit(release r, slot_t slot, std::vector<decode_event>& events);
  void advance_contiguous();

  gf::field field_;
  std::size_t sz_;
  seq_t base_ = 0;
  seq_t contiguous_ = 0;
  seq_t frontier_ = 0;
  std::deque<std::optional<gf::symbol_vector>> store_; // [base_, frontier_)
  linear_system system_;
  decoder_stats stats_;
  gf::op_counter reduction_;
  std::vector<solve_record> solves_;
};

/// True iff every one of the `transmitted` first source packets is known.
bool recurrence_reset_check(const decoder& d, seq_t transmitted) noexcept;

} // namespace otf
