#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace otf::channel {

enum class outcome : std::uint8_t
{
  delivered,
  lost,
};

/// Independent losses with probability p.
struct bernoulli
{
  double p = 0;

  bool operator==(const bernoulli&) const = default;
};

/// Two-state Markov chain: Good delivers, Bad loses. p_gb = P(Good -> Bad),
/// p_bg = P(Bad -> Good).
struct gilbert
{
  double p_gb = 0;
  double p_bg = 0;

  bool operator==(const gilbert&) const = default;
};

using params = std::variant<bernoulli, gilbert>;

/// Throws std::invalid_argument unless every probability is in [0, 1] and a
/// Gilbert chain can leave at least one of its states.
void validate(const params& p);

/// Long-run fraction of lost slots: p, or p_gb / (p_gb + p_bg).
double stationary_loss_rate(const params& p);

/// `bernoulli:p=0.1` or `gilbert:p_gb=0.02,p_bg=0.18`.
params parse(std::string_view text);
std::string to_string(const params& p);

/// A loss process with its own random stream.
class channel
{
public:
  /// Gilbert chains start in a state drawn from the stationary distribution.
  channel(params p, std::uint64_t seed);

  /// Outcome of the current slot, then (Gilbert) the state transition.
  outcome step();

  bool in_bad_state() const noexcept { return bad_; }
  const params& parameters() const noexcept { return params_; }

private:
  params params_;
  std::mt19937_64 gen_;
  bool bad_ = false;
};

/// Replays a recorded trace, wrapping around at the end.
class trace_replay
{
public:
  explicit trace_replay(std::vector<outcome> trace);

  outcome step();

  std::size_t position() const noexcept { return pos_; }

private:
  std::vector<outcome> trace_;
  std::size_t pos_ = 0;
};

/// The trace does not contain a completed loss run and a completed delivery run.
class estimation_unavailable : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct gilbert_estimate
{
  gilbert params;
  double loss_rate = 0;
  std::size_t loss_runs = 0;
  std::size_t delivery_runs = 0;
};

/// Fits a Gilbert chain to an observed trace: p_bg = 1 / mean loss-run
/// length, p_gb = 1 / mean delivery-run length. The last run of the trace
/// has not ended yet and is left out.
gilbert_estimate estimate_gilbert(std::span<const outcome> trace);

/// One character per slot, 'D' or 'L'. Whitespace is ignored on input.
std::vector<outcome> read_trace(std::istream& in);
void write_trace(std::ostream& out, std::span<const outcome> trace, std::size_t line_width = 64);

} // namespace otf::channel
