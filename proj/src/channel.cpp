#include "otf/channel.hpp"

#include "otf/rng.hpp"
#include "otf/spec_string.hpp"

#include <cctype>
#include <istream>
#include <ostream>

namespace otf::channel {

namespace {

void
check_probability(double p, const char* name)
{
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument(std::string{name} + " must be in [0, 1], got " + format_double(p));
}

template <class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

void
validate(const params& p)
{
  std::visit(overloaded{
               [](const bernoulli& b) { check_probability(b.p, "p"); },
               [](const gilbert& g) {
                 check_probability(g.p_gb, "p_gb");
                 check_probability(g.p_bg, "p_bg");
                 if (g.p_gb + g.p_bg <= 0.0)
                   throw std::invalid_argument("gilbert channel needs p_gb + p_bg > 0");
               },
             },
             p);
}

double
stationary_loss_rate(const params& p)
{
  validate(p);
  return std::visit(overloaded{
                      [](const bernoulli& b) { return b.p; },
                      [](const gilbert& g) { return g.p_gb / (g.p_gb + g.p_bg); },
                    },
                    p);
}

params
parse(std::string_view text)
{
  const auto spec = parse_spec_string(text);
  params out;
  if (spec.kind == "bernoulli")
  {
    spec.expect_keys({"p"});
    out = bernoulli{parse_double(spec.at("p"))};
  }
  else if (spec.kind == "gilbert")
  {
    spec.expect_keys({"p_gb", "p_bg"});
    out = gilbert{parse_double(spec.at("p_gb")), parse_double(spec.at("p_bg"))};
  }
  else
    throw spec_error("unknown channel kind '" + spec.kind + "' (expected bernoulli or gilbert)");

  try
  {
    validate(out);
  }
  catch (const std::invalid_argument& e)
  {
    throw spec_error("channel '" + std::string{text} + "': " + e.what());
  }
  return out;
}

std::string
to_string(const params& p)
{
  return std::visit(overloaded{
                      [](const bernoulli& b) { return "bernoulli:p=" + format_double(b.p); },
                      [](const gilbert& g) {
                        return "gilbert:p_gb=" + format_double(g.p_gb) + ",p_bg=" + format_double(g.p_bg);
                      },
                    },
                    p);
}

channel::channel(params p, std::uint64_t seed)
  : params_{p}
  , gen_{seed}
{
  validate(params_);
  if (std::holds_alternative<gilbert>(params_))
    bad_ = unit_double(gen_) < stationary_loss_rate(params_);
}

outcome
channel::step()
{
  if (const auto* b = std::get_if<bernoulli>(&params_))
    return unit_double(gen_) < b->p ? outcome::lost : outcome::delivered;

  const auto& g = std::get<gilbert>(params_);
  const outcome now = bad_ ? outcome::lost : outcome::delivered;
  const double u = unit_double(gen_);
  if (bad_)
    bad_ = !(u < g.p_bg);
  else
    bad_ = u < g.p_gb;
  return now;
}

trace_replay::trace_replay(std::vector<outcome> trace)
  : trace_{std::move(trace)}
{
  if (trace_.empty())
    throw std::invalid_argument("cannot replay an empty loss trace");
}

outcome
trace_replay::step()
{
  const outcome o = trace_[pos_];
  pos_ = (pos_ + 1) % trace_.size();
  return o;
}

gilbert_estimate
estimate_gilbert(std::span<const outcome> trace)
{
  gilbert_estimate est;
  std::uint64_t lost = 0;
  std::uint64_t loss_slots = 0;
  std::uint64_t delivery_slots = 0;

  std::size_t run_start = 0;
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    if (trace[i] == outcome::lost)
      ++lost;
    if (i + 1 < trace.size() && trace[i + 1] != trace[i])
    {
      const std::size_t len = i + 1 - run_start;
      if (trace[i] == outcome::lost)
      {
        ++est.loss_runs;
        loss_slots += len;
      }
      else
      {
        ++est.delivery_runs;
        delivery_slots += len;
      }
      run_start = i + 1;
    }
  }

  if (est.loss_runs == 0 || est.delivery_runs == 0)
    throw estimation_unavailable("trace of " + std::to_string(trace.size()) +
                                 " slots has no completed loss run and delivery run");

  est.params.p_bg = static_cast<double>(est.loss_runs) / static_cast<double>(loss_slots);
  est.params.p_gb = static_cast<double>(est.delivery_runs) / static_cast<double>(delivery_slots);
  est.loss_rate = static_cast<double>(lost) / static_cast<double>(trace.size());
  return est;
}

std::vector<outcome>
read_trace(std::istream& in)
{
  std::vector<outcome> out;
  char c = 0;
  std::size_t offset = 0;
  while (in.get(c))
  {
    if (c == 'D')
      out.push_back(outcome::delivered);
    else if (c == 'L')
      out.push_back(outcome::lost);
    else if (!std::isspace(static_cast<unsigned char>(c)))
      throw std::invalid_argument("unexpected character '" + std::string(1, c) +
                                  "' in loss trace at byte " + std::to_string(offset));
    ++offset;
  }
  return out;
}

void
write_trace(std::ostream& out, std::span<const outcome> trace, std::size_t line_width)
{
  if (line_width == 0)
    throw std::invalid_argument("line width must be positive");
  for (std::size_t i = 0; i < trace.size(); ++i)
  {
    out.put(trace[i] == outcome::lost ? 'L' : 'D');
    if ((i + 1) % line_width == 0 || i + 1 == trace.size())
      out.put('\n');
  }
}

} // namespace otf::channel
