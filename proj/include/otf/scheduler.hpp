#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>

namespace otf {

/// Non-negative fraction in lowest terms.
struct rational
{
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static rational make(std::uint64_t num, std::uint64_t den);
  /// "0.1667", "1/6" or "3".
  static rational parse(std::string_view text);

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  /// Decimal when the fraction terminates, "num/den" otherwise.
  std::string to_string() const;

  bool operator==(const rational&) const = default;
};

/// Every slot is a repair slot with probability `rate`, independently.
struct random_schedule
{
  rational rate;

  bool operator==(const random_schedule&) const = default;
};

/// `k` source slots followed by one repair slot, repeated.
struct periodic_schedule
{
  std::uint64_t k = 1;

  bool operator==(const periodic_schedule&) const = default;
};

using schedule_spec = std::variant<random_schedule, periodic_schedule>;

enum class slot_kind : std::uint8_t
{
  source,
  repair,
};

/// Throws std::invalid_argument unless 0 <= r < 1 and k >= 1.
void validate(const schedule_spec& spec);

/// Nominal repairs / total packets.
rational ratio_of(const schedule_spec& spec);

/// `random:r=0.1667` or `periodic:k=5`.
schedule_spec parse_schedule(std::string_view text);
std::string to_string(const schedule_spec& spec);

class scheduler
{
public:
  scheduler(schedule_spec spec, std::uint64_t seed);

  /// Kind of the next slot. A repair slot is turned into a source slot when
  /// `repair_possible` is false (empty coding window); that is tallied.
  slot_kind next_slot_kind(bool repair_possible = true);

  std::uint64_t slots() const noexcept { return slots_; }
  std::uint64_t repair_slots() const noexcept { return repair_slots_; }
  std::uint64_t substitutions() const noexcept { return substitutions_; }
  const schedule_spec& spec() const noexcept { return spec_; }

private:
  schedule_spec spec_;
  std::mt19937_64 gen_;
  std::uint64_t slots_ = 0;
  std::uint64_t repair_slots_ = 0;
  std::uint64_t substitutions_ = 0;
};

} // namespace otf
