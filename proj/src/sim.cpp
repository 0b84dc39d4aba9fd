#include "otf/sim.hpp"

#include "otf/encoder.hpp"
#include "otf/parallel.hpp"
#include "otf/rng.hpp"

#include <bit>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

namespace otf::sim {

namespace {

enum stream : std::uint64_t
{
  channel_stream,
  scheduler_stream,
  payload_stream,
  coefficient_stream,
};

// Either a live loss process or a recorded trace.
class loss_source
{
public:
  loss_source(const sim_config& config, std::uint64_t seed)
  {
    if (config.trace.empty())
      live_.emplace(config.channel, seed);
    else
      replay_.emplace(config.trace);
  }

  channel::outcome
  step()
  {
    return live_ ? live_->step() : replay_->step();
  }

private:
  std::optional<channel::channel> live_;
  std::optional<channel::trace_replay> replay_;
};

} // namespace

void
validate(const sim_config& config)
{
  if (config.field_w < 1 || config.field_w > 8)
    throw std::invalid_argument("field degree must be in [1, 8]");
  gf::field{config.field_w, config.poly};
  if (config.sz < 1)
    throw std::invalid_argument("payload size must be at least one symbol");
  if (config.packets < 1)
    throw std::invalid_argument("at least one source packet is needed");
  if (config.replications < 1)
    throw std::invalid_argument("at least one replication is needed");
  if (config.drain_cap && *config.drain_cap == 0)
    throw std::invalid_argument("drain cap must be positive");
  channel::validate(config.channel);
  otf::validate(config.schedule);
}

gf::symbol_vector
make_payload(const gf::field& f, std::uint64_t key, seq_t seq, std::size_t sz)
{
  splitmix64 stream{derive_seed(key, seq)};
  const auto mask = static_cast<gf::symbol>(f.size() - 1);
  gf::symbol_vector out(sz);
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < sz; ++i)
  {
    if (i % 8 == 0)
      bits = stream();
    out[i] = static_cast<gf::symbol>(bits >> (8 * (i % 8))) & mask;
  }
  return out;
}

sim_report
run_simulation(const sim_config& config, unsigned replication)
{
  validate(config);
  const std::uint64_t run_seed = derive_seed(config.seed, replication);
  const gf::field f{config.field_w, config.poly};
  const std::uint64_t payload_key = derive_seed(run_seed, payload_stream);

  encoder enc{f, config.sz, derive_seed(run_seed, coefficient_stream)};
  decoder dec{f, config.sz};
  scheduler sched{config.schedule, derive_seed(run_seed, scheduler_stream)};
  loss_source losses{config, derive_seed(run_seed, channel_stream)};

  sim_report report;
  std::vector<slot_t> sent_slot;
  sent_slot.reserve(config.packets);
  std::vector<std::uint64_t> delays{0}; // histogram indexed by delay
  std::uint64_t recovered_delay_sum = 0;
  std::deque<std::pair<slot_t, seq_t>> feedback;

  std::optional<slot_t> last_sync;
  std::vector<std::uint64_t> recurrence;
  auto record_sync = [&](slot_t slot) {
    const std::uint64_t gap = last_sync ? slot - *last_sync : slot + 1;
    if (gap >= recurrence.size())
      recurrence.resize(gap + 1, 0);
    ++recurrence[gap];
    ++report.recurrence_samples;
    report.max_recurrence = std::max(report.max_recurrence, gap);
    last_sync = slot;
  };

  auto consume = [&](const std::vector<decode_event>& events) {
    for (const auto& ev : events)
    {
      ++report.decoded;
      if (!ev.recovered)
      {
        ++delays[0];
        continue;
      }
      ++report.recovered;
      const std::uint64_t delay = ev.decode_slot - sent_slot[ev.seq];
      if (delay >= delays.size())
        delays.resize(delay + 1, 0);
      ++delays[delay];
      recovered_delay_sum += delay;
      if (ev.payload != make_payload(f, payload_key, ev.seq, config.sz))
        ++report.payload_mismatches;
    }
  };

  slot_t slot = 0;
  std::optional<slot_t> drain_start;
  while (true)
  {
    const bool sending = enc.next_seq() < config.packets;
    if (!sending)
    {
      if (dec.contiguous_known() >= config.packets)
        break;
      if (!drain_start)
      {
        drain_start = slot;
        report.drain_cap = config.drain_cap.value_or(std::max<std::uint64_t>(1000, 10 * report.max_recurrence));
      }
      if (slot - *drain_start >= report.drain_cap)
      {
        report.drain_truncated = true;
        break;
      }
    }

    const slot_kind kind = sched.next_slot_kind(!enc.window_empty());
    if (kind == slot_kind::repair)
    {
      const auto repair = enc.make_repair(slot);
      ++report.repairs_sent;
      if (losses.step() == channel::outcome::lost)
        ++report.lost_repairs;
      else
        consume(dec.on_repair(*repair, slot));
    }
    else if (sending)
    {
      const auto pkt = enc.push_source(make_payload(f, payload_key, enc.next_seq(), config.sz), slot);
      sent_slot.push_back(slot);
      if (losses.step() == channel::outcome::lost)
        ++report.lost_sources;
      else
        consume(dec.on_source(pkt, slot));
    }

    if (recurrence_reset_check(dec, enc.next_seq()))
      record_sync(slot);

    feedback.emplace_back(slot + config.feedback_delay, dec.contiguous_known());
    while (!feedback.empty() && feedback.front().first <= slot)
    {
      enc.acknowledge(feedback.front().second);
      dec.forget_below(feedback.front().second);
      feedback.pop_front();
    }
    ++slot;
  }

  report.packets = enc.next_seq();
  report.slots = slot;
  report.drain_slots = drain_start ? slot - *drain_start : 0;
  report.undecoded = report.packets - report.decoded;

  for (std::uint64_t d = 0; d < delays.size(); ++d)
    if (delays[d] != 0)
      report.delay_histogram.emplace(d, delays[d]);
  if (report.recovered > 0)
    report.mean_delay_recovered = static_cast<double>(recovered_delay_sum) / static_cast<double>(report.recovered);
  if (report.decoded > 0)
    report.mean_delay_all = static_cast<double>(recovered_delay_sum) / static_cast<double>(report.decoded);

  report.solves = dec.take_solves();
  std::uint64_t m_sum = 0;
  for (const auto& s : report.solves)
  {
    report.max_m = std::max(report.max_m, s.m);
    m_sum += s.m;
  }
  if (!report.solves.empty())
    report.mean_m = static_cast<double>(m_sum) / static_cast<double>(report.solves.size());

  std::uint64_t recurrence_sum = 0;
  for (std::uint64_t g = 0; g < recurrence.size(); ++g)
    if (recurrence[g] != 0)
    {
      report.recurrence_histogram.emplace(g, recurrence[g]);
      recurrence_sum += g * recurrence[g];
    }
  if (report.recurrence_samples > 0)
    report.mean_recurrence = static_cast<double>(recurrence_sum) / static_cast<double>(report.recurrence_samples);
  report.last_sync_slot = last_sync;

  report.reduction_ops = dec.reduction_counter();
  report.elimination_ops = dec.elimination_counter();
  report.decoder_ops = dec.total_counter();
  report.encoder_ops = enc.counter();
  report.dependent_repairs = dec.stats().dependent_repairs;
  report.duplicates = dec.stats().duplicates;
  report.stale_repairs = dec.stats().stale_repairs;
  report.substitutions = sched.substitutions();
  return report;
}

std::vector<sim_report>
run_replications(const sim_config& config, unsigned threads)
{
  validate(config);
  std::vector<sim_report> reports(config.replications);
  parallel_for(reports.size(), threads, [&](std::size_t i) {
    reports[i] = run_simulation(config, static_cast<unsigned>(i));
  });
  return reports;
}

std::vector<complexity_row>
complexity_report(const sim_report& report)
{
  std::vector<complexity_row> rows;
  rows.reserve(report.solves.size());
  for (const auto& s : report.solves)
    rows.push_back({s.m, s.work.mul_count, s.work.inv_count, s.released});
  return rows;
}

probe_result
singularity_probe(std::uint32_t q, std::size_t m, std::uint64_t trials, std::uint64_t seed)
{
  if (q < 2 || q > 256 || !std::has_single_bit(q))
    throw std::invalid_argument("field size must be a power of two in [2, 256], got " + std::to_string(q));
  if (m < 1 || trials < 1)
    throw std::invalid_argument("probe needs m >= 1 and at least one trial");

  const gf::field f{static_cast<unsigned>(std::countr_zero(q))};
  splitmix64 stream{seed};
  gf::op_counter scratch;
  gf::symbol_vector matrix(m * m);

  probe_result out{q, m, trials, 0, 0, 0};
  for (std::uint64_t t = 0; t < trials; ++t)
  {
    for (auto& entry : matrix)
      entry = static_cast<gf::symbol>(stream() >> (64 - f.degree()));
    if (gf::rank(f, matrix, m, m, scratch) == m)
      ++out.invertible;
  }
  out.rate = static_cast<double>(out.invertible) / static_cast<double>(trials);
  out.standard_error = std::sqrt(out.rate * (1 - out.rate) / static_cast<double>(trials));
  return out;
}

double
invertible_probability(std::uint32_t q, std::size_t m)
{
  double p = 1;
  double q_pow = 1;
  for (std::size_t i = 1; i <= m; ++i)
  {
    q_pow *= q;
    p *= 1 - 1 / q_pow;
  }
  return p;
}

summary_stat
summarize(std::span<const double> values)
{
  summary_stat s;
  if (values.empty())
    return s;
  const auto n = static_cast<double>(values.size());
  for (double v : values)
    s.mean += v;
  s.mean /= n;
  if (values.size() < 2)
    return s;
  double ss = 0;
  for (double v : values)
    ss += (v - s.mean) * (v - s.mean);
  s.standard_error = std::sqrt(ss / (n - 1) / n);
  return s;
}

} // namespace otf::sim
