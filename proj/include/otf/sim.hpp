#pragma once

#include "otf/channel.hpp"
#include "otf/decoder.hpp"
#include "otf/gf.hpp"
#include "otf/scheduler.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace otf::sim {

struct sim_config
{
  unsigned field_w = 8;
  std::optional<std::uint32_t> poly;
  std::size_t sz = 64;
  channel::params channel = channel::bernoulli{0.1};
  schedule_spec schedule = random_schedule{rational::make(1667, 10000)};
  std::uint64_t feedback_delay = 0;
  std::uint64_t packets = 100000;
  std::uint64_t seed = 1;
  unsigned replications = 1;
  /// Slots allowed after the last source before giving up on the tail.
  /// Default: max(1000, 10 x longest recurrence time seen before the horizon).
  std::optional<std::uint64_t> drain_cap;
  /// When non-empty, losses are replayed from this trace instead of `channel`.
  std::vector<channel::outcome> trace;

  bool operator==(const sim_config&) const = default;
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const sim_config& config);

struct sim_report
{
  std::uint64_t packets = 0; // source packets sent
  std::uint64_t slots = 0;
  std::uint64_t repairs_sent = 0;
  std::uint64_t lost_sources = 0;
  std::uint64_t lost_repairs = 0;

  std::uint64_t decoded = 0;
  std::uint64_t recovered = 0;
  std::uint64_t undecoded = 0;
  /// Over lost-then-recovered packets only.
  double mean_delay_recovered = 0;
  /// Over every decoded packet, direct receptions counting 0.
  double mean_delay_all = 0;
  std::map<std::uint64_t, std::uint64_t> delay_histogram;

  std::vector<solve_record> solves;
  std::size_t max_m = 0;
  double mean_m = 0;

  /// Slots between consecutive instants at which every sent source is known.
  std::map<std::uint64_t, std::uint64_t> recurrence_histogram;
  std::uint64_t recurrence_samples = 0;
  double mean_recurrence = 0;
  std::uint64_t max_recurrence = 0;
  /// Slot of the last in-sync instant; samples sum to last_sync_slot + 1.
  std::optional<slot_t> last_sync_slot;

  /// Decoder work: reduction + elimination.
  gf::op_counter decoder_ops;
  gf::op_counter reduction_ops;
  gf::op_counter elimination_ops;
  gf::op_counter encoder_ops;

  std::uint64_t dependent_repairs = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t stale_repairs = 0;
  std::uint64_t substitutions = 0;

  std::uint64_t drain_cap = 0;
  std::uint64_t drain_slots = 0;
  bool drain_truncated = false;
  std::uint64_t payload_mismatches = 0;

  bool operator==(const sim_report&) const = default;
};

/// Payload of source `seq` in a run keyed by `key`: a pure function, so
/// recovered packets can be checked without keeping the originals.
gf::symbol_vector make_payload(const gf::field& f, std::uint64_t key, seq_t seq, std::size_t sz);

/// One replication. Deterministic in (config, replication).
sim_report run_simulation(const sim_config& config, unsigned replication = 0);

/// config.replications independent runs on up to `threads` threads
/// (0 = hardware concurrency). Result order is replication order.
std::vector<sim_report> run_replications(const sim_config& config, unsigned threads = 0);

struct complexity_row
{
  std::size_t m = 0;
  std::uint64_t mul_count = 0;
  std::uint64_t inv_count = 0;
  std::size_t released = 0;
};

/// One row per solve of the run.
std::vector<complexity_row> complexity_report(const sim_report& report);

struct probe_result
{
  std::uint32_t q = 0;
  std::size_t m = 0;
  std::uint64_t trials = 0;
  std::uint64_t invertible = 0;
  double rate = 0;
  double standard_error = 0;
};

/// Fraction of uniformly random m x m matrices over GF(q) that are
/// invertible. q must be a power of two in [2, 256].
probe_result singularity_probe(std::uint32_t q, std::size_t m, std::uint64_t trials, std::uint64_t seed);

/// prod_{i=1..m} (1 - q^-i)
double invertible_probability(std::uint32_t q, std::size_t m);

struct summary_stat
{
  double mean = 0;
  double standard_error = 0;
};

/// Mean and standard error of the mean (0 for fewer than two values).
summary_stat summarize(std::span<const double> values);

} // namespace otf::sim
