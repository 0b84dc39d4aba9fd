#pragma once

#include "otf/sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace otf::cli {

/// Exit codes.
enum exit_code : int
{
  success = 0,
  runtime_failure = 1,
  usage_failure = 2,
};

class usage_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class command
{
  run,
  grid,
  probe,
  estimate,
};

/// Parsed command line. For `run` and `grid` every list holds at least one
/// value; the cells are the cartesian product.
struct experiment_grid
{
  command cmd = command::run;

  std::vector<channel::params> channels;
  std::vector<schedule_spec> schedulers;
  std::vector<unsigned> fields;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> horizons;
  std::vector<std::uint64_t> seeds;
  std::optional<std::uint32_t> poly;
  unsigned reps = 1;
  std::uint64_t feedback_delay = 0;
  std::optional<std::uint64_t> drain_cap;
  std::string trace_path;
  /// Output prefix: <out>.csv and <out>.json. Empty: CSV on stdout, no JSON.
  std::string out;

  std::uint32_t probe_q = 256;
  std::size_t probe_m = 4;
  std::uint64_t probe_trials = 100000;

  std::string estimate_path;

  /// Cartesian product in row-major order: channel, scheduler, field, sz,
  /// horizon, seed (seed varies fastest).
  std::vector<sim::sim_config> cells() const;
};

/// Throws usage_error. `args` excludes the program name.
experiment_grid parse_args(const std::vector<std::string>& args);

std::string usage();

struct cell_result
{
  sim::sim_config config;
  std::vector<sim::sim_report> reports;
  std::optional<std::string> error;
};

/// Runs every (cell, replication) on up to `threads` workers; cells fail
/// independently.
std::vector<cell_result> run_grid(const experiment_grid& grid, unsigned threads);

/// Fixed column set, in order.
const std::vector<std::string>& csv_columns();

/// Header plus one row per (cell, replication) of every successful cell.
std::string format_csv(const std::vector<cell_result>& results, const experiment_grid& grid);

/// Across-replication means and standard errors, one entry per cell.
std::string format_summary(const std::vector<cell_result>& results);

/// A CSV row read back: the configuration it was produced from.
struct csv_record
{
  std::size_t cell = 0;
  unsigned rep = 0;
  sim::sim_config config;
  std::string trace_path;
};

csv_record parse_csv_row(std::string_view line);

/// Splits one CSV line, honoring double quotes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Writes <out>.csv and <out>.json, or the CSV to `stdout_stream` when no
/// prefix was given. Throws std::runtime_error if a file cannot be written.
void emit_results(const std::vector<cell_result>& results, const experiment_grid& grid,
                  std::ostream& stdout_stream);

/// Worker count from OTF_FEC_THREADS (unset or 0: hardware concurrency).
unsigned threads_from_environment();

/// Whole program; returns the exit code.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace otf::cli
