#include "otf/channel.hpp"
#include "otf/spec_string.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace otf::channel;

namespace {

std::vector<outcome>
draw(const params& p, std::uint64_t seed, std::size_t n)
{
  channel ch{p, seed};
  std::vector<outcome> out(n);
  for (auto& o : out)
    o = ch.step();
  return out;
}

double
loss_fraction(const std::vector<outcome>& t)
{
  return static_cast<double>(std::count(t.begin(), t.end(), outcome::lost)) / static_cast<double>(t.size());
}

// Lengths of completed runs of `kind` (the final run is dropped).
std::vector<double>
run_lengths(const std::vector<outcome>& t, outcome kind)
{
  std::vector<double> runs;
  std::size_t i = 0;
  while (i < t.size())
  {
    std::size_t j = i;
    while (j < t.size() && t[j] == t[i])
      ++j;
    if (t[i] == kind && j < t.size())
      runs.push_back(static_cast<double>(j - i));
    i = j;
  }
  return runs;
}

} // namespace

TEST_CASE("bernoulli extremes")
{
  for (auto o : draw(bernoulli{0}, 1, 1000))
    CHECK(o == outcome::delivered);
  for (auto o : draw(bernoulli{1}, 1, 1000))
    CHECK(o == outcome::lost);
}

TEST_CASE("stationary loss rate")
{
  CHECK(stationary_loss_rate(bernoulli{0.1}) == doctest::Approx(0.1));
  CHECK(stationary_loss_rate(gilbert{0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(stationary_loss_rate(gilbert{0.02, 0.18}) == doctest::Approx(0.1));
  CHECK(stationary_loss_rate(gilbert{0, 1}) == doctest::Approx(0.0));
}

TEST_CASE("validation")
{
  CHECK_THROWS_AS(validate(bernoulli{-0.1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(bernoulli{1.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(gilbert{0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(gilbert{0.1, std::nan("")}), std::invalid_argument);
  CHECK_NOTHROW(validate(gilbert{1, 1}));
}

TEST_CASE("bernoulli loss fraction within 3 standard errors at 10^6")
{
  const double p = 0.1;
  const std::size_t n = 1'000'000;
  const double se = std::sqrt(p * (1 - p) / n);
  for (std::uint64_t seed : {1u, 2u, 3u})
    CHECK(std::abs(loss_fraction(draw(bernoulli{p}, seed, n)) - p) < 3 * se);
}

TEST_CASE("gilbert loss fraction converges to p_gb / (p_gb + p_bg)")
{
  const std::size_t n = 1'000'000;
  for (gilbert g : {gilbert{0.02, 0.18}, gilbert{0.05, 0.3}, gilbert{0.3, 0.4}})
  {
    const double pi = g.p_gb / (g.p_gb + g.p_bg);
    const double lambda = 1 - g.p_gb - g.p_bg;
    // Effective sample size for a two-state chain with eigenvalue lambda.
    const double se = std::sqrt(pi * (1 - pi) / n * (1 + lambda) / (1 - lambda));
    CHECK(std::abs(loss_fraction(draw(g, 7, n)) - pi) < 3 * se);
  }
}

TEST_CASE("gilbert run lengths are geometric")
{
  const gilbert g{0.02, 0.18};
  const auto trace = draw(g, 8, 1'000'000);
  for (auto [kind, p] : {std::pair{outcome::lost, g.p_bg}, std::pair{outcome::delivered, g.p_gb}})
  {
    const auto runs = run_lengths(trace, kind);
    double mean = 0;
    for (double r : runs)
      mean += r;
    mean /= static_cast<double>(runs.size());
    double var = 0;
    for (double r : runs)
      var += (r - mean) * (r - mean);
    var /= static_cast<double>(runs.size() - 1);

    const double want_var = (1 - p) / (p * p);
    CHECK(std::abs(mean - 1 / p) < 3 * std::sqrt(want_var / static_cast<double>(runs.size())));
    CHECK(var == doctest::Approx(want_var).epsilon(0.1));
  }
}

TEST_CASE("estimator examples")
{
  using enum outcome;
  SUBCASE("hand trace")
  {
    // D D L L D D D L D | last run (D) dropped
    const std::vector<outcome> t = {delivered, delivered, lost, lost, delivered, delivered, delivered, lost, delivered};
    const auto e = estimate_gilbert(t);
    CHECK(e.loss_runs == 2);
    CHECK(e.delivery_runs == 2);
    CHECK(e.params.p_bg == doctest::Approx(1 / 1.5));
    CHECK(e.params.p_gb == doctest::Approx(1 / 2.5));
    CHECK(e.loss_rate == doctest::Approx(3.0 / 9));
  }
  SUBCASE("no completed loss run")
  {
    CHECK_THROWS_AS(estimate_gilbert(std::vector<outcome>(10, delivered)), estimation_unavailable);
    CHECK_THROWS_AS(estimate_gilbert(std::vector<outcome>{delivered, lost}), estimation_unavailable);
    CHECK_THROWS_AS(estimate_gilbert(std::vector<outcome>{}), estimation_unavailable);
  }
}

TEST_CASE("estimator recovers parameters within 10% at 10^6")
{
  for (gilbert g : {gilbert{0.02, 0.18}, gilbert{0.01, 0.5}, gilbert{0.1, 0.1}, gilbert{0.5, 0.25}})
  {
    const auto e = estimate_gilbert(draw(g, 11, 1'000'000));
    CHECK(e.params.p_gb == doctest::Approx(g.p_gb).epsilon(0.1));
    CHECK(e.params.p_bg == doctest::Approx(g.p_bg).epsilon(0.1));
  }
}

TEST_CASE("trace replay wraps")
{
  using enum outcome;
  trace_replay r{{lost, delivered, delivered}};
  CHECK(r.step() == lost);
  CHECK(r.step() == delivered);
  CHECK(r.step() == delivered);
  CHECK(r.step() == lost);
  CHECK(r.position() == 1);
  CHECK_THROWS_AS(trace_replay{{}}, std::invalid_argument);
}

TEST_CASE("trace text round trip")
{
  const auto t = draw(gilbert{0.1, 0.3}, 3, 1000);
  std::stringstream ss;
  write_trace(ss, t, 50);
  CHECK(ss.str().find('\n') == 50);
  CHECK(read_trace(ss) == t);

  std::istringstream messy{"DL \n\tLD\n"};
  CHECK(read_trace(messy).size() == 4);
  std::istringstream bad{"DLX"};
  CHECK_THROWS_AS(read_trace(bad), std::invalid_argument);
}

TEST_CASE("spec strings")
{
  CHECK(parse("bernoulli:p=0.1") == params{bernoulli{0.1}});
  CHECK(parse("gilbert:p_gb=0.02,p_bg=0.18") == params{gilbert{0.02, 0.18}});
  for (const params& p : {params{bernoulli{0.25}}, params{gilbert{0.02, 0.18}}})
    CHECK(parse(to_string(p)) == p);
  CHECK(to_string(bernoulli{0.1}) == "bernoulli:p=0.1");
  CHECK_THROWS_AS(parse("bernouli:p=0.1"), otf::spec_error);
  CHECK_THROWS_AS(parse("bernoulli:q=0.1"), otf::spec_error);
  CHECK_THROWS_AS(parse("bernoulli:p=abc"), otf::spec_error);
  CHECK_THROWS_AS(parse("bernoulli:p=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse("gilbert:p_gb=0.1"), otf::spec_error);
}

TEST_CASE("same seed, same losses")
{
  CHECK(draw(gilbert{0.1, 0.2}, 5, 5000) == draw(gilbert{0.1, 0.2}, 5, 5000));
  CHECK(draw(gilbert{0.1, 0.2}, 5, 5000) != draw(gilbert{0.1, 0.2}, 6, 5000));
}
