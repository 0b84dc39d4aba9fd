#include "oracle.hpp"

#include "otf/sim.hpp"

#include <doctest.h>

#include <cmath>

using namespace otf;
using namespace otf::sim;

namespace {

sim_config
small(std::uint64_t packets = 20000)
{
  sim_config c;
  c.sz = 8;
  c.packets = packets;
  return c;
}

} // namespace

TEST_CASE("lossless channel: nothing to recover, nothing to solve")
{
  auto c = small();
  c.channel = channel::bernoulli{0};
  const auto r = run_simulation(c);
  CHECK(r.decoded == c.packets);
  CHECK(r.recovered == 0);
  CHECK(r.mean_delay_recovered == 0);
  CHECK(r.mean_delay_all == 0);
  CHECK(r.decoder_ops.mul_count == 0);
  CHECK(r.solves.empty());
  CHECK(complexity_report(r).empty());
  CHECK(r.dependent_repairs == r.repairs_sent);
  // In sync after every slot.
  CHECK(r.recurrence_histogram == std::map<std::uint64_t, std::uint64_t>{{1, r.slots}});
}

TEST_CASE("default run decodes everything and verifies payloads")
{
  const auto c = small();
  const auto r = run_simulation(c);
  CHECK(r.packets == c.packets);
  CHECK(r.decoded == c.packets);
  CHECK(r.undecoded == 0);
  CHECK(r.payload_mismatches == 0);
  CHECK(r.recovered == r.lost_sources);
  CHECK(r.slots >= r.packets + r.repairs_sent);
  CHECK(r.mean_delay_recovered >= 1);
  CHECK(r.mean_delay_all <= r.mean_delay_recovered);
  CHECK_FALSE(r.drain_truncated);
  CHECK(r.drain_cap >= 1000);

  SUBCASE("delay histogram holds every decoded packet; recovered ones wait at least a slot")
  {
    std::uint64_t mass = 0;
    double total = 0;
    for (auto [d, n] : r.delay_histogram)
    {
      mass += n;
      total += static_cast<double>(d * n);
    }
    CHECK(mass == r.decoded);
    CHECK(r.delay_histogram.at(0) == r.decoded - r.recovered);
    CHECK(total / static_cast<double>(r.recovered) == doctest::Approx(r.mean_delay_recovered));
    CHECK(total / static_cast<double>(r.decoded) == doctest::Approx(r.mean_delay_all));
  }
  SUBCASE("recurrence gaps partition the slots up to the last in-sync instant")
  {
    REQUIRE(r.last_sync_slot.has_value());
    std::uint64_t covered = 0, samples = 0, longest = 0;
    for (auto [gap, n] : r.recurrence_histogram)
    {
      CHECK(gap >= 1);
      covered += gap * n;
      samples += n;
      longest = std::max(longest, gap);
    }
    CHECK(covered == *r.last_sync_slot + 1);
    CHECK(samples == r.recurrence_samples);
    CHECK(longest == r.max_recurrence);
  }
  SUBCASE("solve records")
  {
    std::uint64_t released = 0, muls = 0;
    for (const auto& row : complexity_report(r))
    {
      CHECK(row.m >= row.released);
      CHECK(row.released >= 1);
      CHECK(row.mul_count <= row.m * row.m * row.m + 2 * c.sz * row.m * row.m + row.m * row.m);
      released += row.released;
      muls += row.mul_count;
    }
    CHECK(released == r.recovered);
    CHECK(muls == r.elimination_ops.mul_count);
    CHECK(r.decoder_ops.mul_count == r.elimination_ops.mul_count + r.reduction_ops.mul_count);
  }
}

TEST_CASE("determinism")
{
  const auto c = small(5000);
  CHECK(run_simulation(c) == run_simulation(c));
  CHECK_FALSE(run_simulation(c, 0) == run_simulation(c, 1));
  auto other = c;
  other.seed = 2;
  CHECK_FALSE(run_simulation(c) == run_simulation(other));

  auto reps = c;
  reps.replications = 3;
  const auto many = run_replications(reps, 2);
  REQUIRE(many.size() == 3);
  for (unsigned i = 0; i < 3; ++i)
    CHECK(many[i] == run_simulation(reps, i));
}

TEST_CASE("payload derivation")
{
  const gf::field f{3};
  const auto p = make_payload(f, 9, 4, 100);
  CHECK(p.size() == 100);
  CHECK(p == make_payload(f, 9, 4, 100));
  CHECK(p != make_payload(f, 9, 5, 100));
  for (auto s : p)
    CHECK(s < 8);
}

TEST_CASE("periodic schedule with feedback delay")
{
  auto c = small();
  c.schedule = periodic_schedule{5};
  const auto fast = run_simulation(c);
  c.feedback_delay = 20;
  const auto slow = run_simulation(c);
  CHECK(fast.decoded == c.packets);
  CHECK(slow.decoded == c.packets);
  CHECK(slow.payload_mismatches == 0);
  // A stale acknowledgement keeps more sources in every repair.
  CHECK(slow.encoder_ops.mul_count > fast.encoder_ops.mul_count);
}

TEST_CASE("small fields")
{
  for (unsigned w : {1u, 2u, 4u})
  {
    auto c = small(5000);
    c.field_w = w;
    const auto r = run_simulation(c);
    CHECK(r.payload_mismatches == 0);
    CHECK(r.decoded == c.packets);
    if (w == 1)
      CHECK(r.dependent_repairs > 0);
  }
}

TEST_CASE("trace replay")
{
  using enum channel::outcome;
  auto c = small(2000);
  c.trace.assign(9, delivered);
  c.trace.push_back(lost);
  const auto r = run_simulation(c);
  const std::uint64_t transmitted = r.packets + r.repairs_sent;
  CHECK(r.lost_sources + r.lost_repairs == transmitted / 10);
  CHECK(r.decoded == c.packets);

  c.trace = {delivered};
  CHECK(run_simulation(c).recovered == 0);
}

TEST_CASE("drain cap")
{
  auto c = small(2000);
  c.channel = channel::bernoulli{0.6};
  c.drain_cap = 5;
  const auto r = run_simulation(c);
  CHECK(r.drain_cap == 5);
  CHECK(r.drain_slots <= 5);
  CHECK(r.payload_mismatches == 0);
  CHECK(r.decoded + r.undecoded == r.packets);
}

TEST_CASE("config validation")
{
  auto bad = [](auto change) {
    auto c = small();
    change(c);
    return c;
  };
  CHECK_NOTHROW(validate(small()));
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.sz = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.packets = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.field_w = 9; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.poly = 0x100; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.replications = 0; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.channel = channel::bernoulli{2}; })), std::invalid_argument);
  CHECK_THROWS_AS(validate(bad([](auto& c) { c.schedule = periodic_schedule{0}; })), std::invalid_argument);
  CHECK_THROWS_AS(run_simulation(bad([](auto& c) { c.sz = 0; })), std::invalid_argument);
}

TEST_CASE("invertible probability")
{
  CHECK(invertible_probability(2, 1) == doctest::Approx(0.5));
  CHECK(invertible_probability(2, 2) == doctest::Approx(0.375));
  CHECK(invertible_probability(256, 1) == doctest::Approx(255.0 / 256));
  // Exhaustive count for tiny cases.
  for (unsigned w : {1u, 2u})
    for (std::size_t n : {1u, 2u})
    {
      const oracle::field f{w, w == 1 ? 0x3u : 0x7u};
      const double total = std::pow(f.q(), static_cast<double>(n * n));
      CHECK(static_cast<double>(oracle::count_invertible(f, n)) / total ==
            doctest::Approx(invertible_probability(f.q(), n)));
    }
}

TEST_CASE("singularity probe")
{
  const auto p = singularity_probe(2, 2, 100000, 1);
  CHECK(p.q == 2);
  CHECK(p.trials == 100000);
  CHECK(p.rate == doctest::Approx(static_cast<double>(p.invertible) / 100000));
  CHECK(p.standard_error == doctest::Approx(std::sqrt(p.rate * (1 - p.rate) / 100000)));
  CHECK(std::abs(p.rate - 0.375) < 3 * p.standard_error);
  CHECK(singularity_probe(256, 1, 1000, 3).invertible > 980);
  CHECK_THROWS_AS(singularity_probe(3, 2, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(singularity_probe(512, 2, 10, 1), std::invalid_argument);
}

TEST_CASE("summary statistics")
{
  const std::vector<double> v = {1, 2, 3, 4};
  const auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.standard_error == doctest::Approx(std::sqrt(5.0 / 3 / 4)));
  CHECK(summarize(std::vector<double>{7}).standard_error == 0);
}
