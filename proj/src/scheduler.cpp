#include "otf/scheduler.hpp"

#include "otf/rng.hpp"
#include "otf/spec_string.hpp"

#include <numeric>
#include <stdexcept>

namespace otf {

rational
rational::make(std::uint64_t num, std::uint64_t den)
{
  if (den == 0)
    throw std::invalid_argument("zero denominator");
  const auto g = std::gcd(num, den);
  return g == 0 ? rational{0, 1} : rational{num / g, den / g};
}

rational
rational::parse(std::string_view text)
{
  if (const auto slash = text.find('/'); slash != std::string_view::npos)
  {
    const auto den = parse_unsigned(text.substr(slash + 1));
    if (den == 0)
      throw spec_error("zero denominator in '" + std::string{text} + "'");
    return make(parse_unsigned(text.substr(0, slash)), den);
  }

  const auto dot = text.find('.');
  const std::string_view whole = text.substr(0, dot);
  const std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if ((whole.empty() && frac.empty()) || frac.size() > 18)
    throw spec_error("not a decimal fraction: '" + std::string{text} + "'");

  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i)
    den *= 10;
  const std::uint64_t w = whole.empty() ? 0 : parse_unsigned(whole);
  const std::uint64_t f = frac.empty() ? 0 : parse_unsigned(frac);
  if (w > (UINT64_MAX - f) / den)
    throw spec_error("value out of range: '" + std::string{text} + "'");
  return make(w * den + f, den);
}

std::string
rational::to_string() const
{
  std::uint64_t d = den;
  unsigned twos = 0;
  unsigned fives = 0;
  for (; d % 2 == 0; d /= 2)
    ++twos;
  for (; d % 5 == 0; d /= 5)
    ++fives;
  if (d != 1)
    return std::to_string(num) + "/" + std::to_string(den);

  // Terminating: scale to a power of ten.
  const unsigned digits = std::max(twos, fives);
  unsigned __int128 scaled = num;
  for (unsigned i = twos; i < digits; ++i)
    scaled *= 2;
  for (unsigned i = fives; i < digits; ++i)
    scaled *= 5;
  unsigned __int128 pow10 = 1;
  for (unsigned i = 0; i < digits; ++i)
    pow10 *= 10;

  std::string out = std::to_string(static_cast<std::uint64_t>(scaled / pow10));
  if (digits > 0)
  {
    std::string frac = std::to_string(static_cast<std::uint64_t>(scaled % pow10));
    out += "." + std::string(digits - frac.size(), '0') + frac;
  }
  return out;
}

namespace {

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

void
validate(const schedule_spec& spec)
{
  std::visit(overloaded{
               [](const random_schedule& r) {
                 if (r.rate.den == 0 || r.rate.num >= r.rate.den)
                   throw std::invalid_argument("repair probability must be in [0, 1), got " +
                                               r.rate.to_string());
               },
               [](const periodic_schedule& p) {
                 if (p.k < 1)
                   throw std::invalid_argument("periodic schedule needs k >= 1");
               },
             },
             spec);
}

rational
ratio_of(const schedule_spec& spec)
{
  return std::visit(overloaded{
                      [](const random_schedule& r) { return r.rate; },
                      [](const periodic_schedule& p) { return rational::make(1, p.k + 1); },
                    },
                    spec);
}

schedule_spec
parse_schedule(std::string_view text)
{
  const auto spec = parse_spec_string(text);
  schedule_spec out;
  if (spec.kind == "random")
  {
    spec.expect_keys({"r"});
    out = random_schedule{rational::parse(spec.at("r"))};
  }
  else if (spec.kind == "periodic")
  {
    spec.expect_keys({"k"});
    out = periodic_schedule{parse_unsigned(spec.at("k"))};
  }
  else
    throw spec_error("unknown scheduler kind '" + spec.kind + "' (expected random or periodic)");

  try
  {
    validate(out);
  }
  catch (const std::invalid_argument& e)
  {
    throw spec_error("scheduler '" + std::string{text} + "': " + e.what());
  }
  return out;
}

std::string
to_string(const schedule_spec& spec)
{
  return std::visit(overloaded{
                      [](const random_schedule& r) { return "random:r=" + r.rate.to_string(); },
                      [](const periodic_schedule& p) { return "periodic:k=" + std::to_string(p.k); },
                    },
                    spec);
}

scheduler::scheduler(schedule_spec spec, std::uint64_t seed)
  : spec_{spec}
  , gen_{seed}
{
  validate(spec_);
}

slot_kind
scheduler::next_slot_kind(bool repair_possible)
{
  const std::uint64_t index = slots_++;
  const bool repair = std::visit(overloaded{
                                   [&](const random_schedule& r) { return bounded(gen_, r.rate.den) < r.rate.num; },
                                   [&](const periodic_schedule& p) { return (index + 1) % (p.k + 1) == 0; },
                                 },
                                 spec_);
  if (!repair)
    return slot_kind::source;
  if (!repair_possible)
  {
    ++substitutions_;
    return slot_kind::source;
  }
  ++repair_slots_;
  return slot_kind::repair;
}

} // namespace otf
