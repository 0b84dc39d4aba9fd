#include "otf/cli.hpp"

#include "otf/parallel.hpp"
#include "otf/spec_string.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace otf::cli {

namespace {

// Raw option values before conversion to domain types.
struct raw_options
{
  std::vector<std::string> channels;
  std::vector<std::string> schedulers;
  std::vector<unsigned> fields;
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> horizons;
  std::vector<std::uint64_t> seeds;
  std::string poly;
  unsigned reps = 1;
  std::uint64_t feedback_delay = 0;
  std::uint64_t drain_cap = 0;
  std::string trace_path;
  std::string out;

  std::uint32_t probe_q = 256;
  std::size_t probe_m = 4;
  std::uint64_t probe_trials = 100000;
  std::uint64_t probe_seed = 1;

  std::string estimate_path;
};

class help_requested : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct app_bundle
{
  CLI::App app{"Simulator for on-the-fly erasure coding with sliding-window repair packets", "otf-fec"};
  CLI::App* run = nullptr;
  CLI::App* grid = nullptr;
  CLI::App* probe = nullptr;
  CLI::App* estimate = nullptr;
};

void
add_sim_options(CLI::App& sub, raw_options& raw)
{
  sub.add_option("--channel", raw.channels, "Loss channel: bernoulli:p=P or gilbert:p_gb=A,p_bg=B");
  sub.add_option("--scheduler", raw.schedulers, "Repair schedule: random:r=R or periodic:k=K");
  sub.add_option("--field", raw.fields, "Field degree w (symbols in GF(2^w)), 1..8")->delimiter(',');
  sub.add_option("--poly", raw.poly, "Reduction polynomial as hex (e.g. 0x11D)");
  sub.add_option("--sz", raw.sizes, "Symbols per payload")->delimiter(',');
  sub.add_option("--packets", raw.horizons, "Source packets per run")->delimiter(',');
  sub.add_option("--seed", raw.seeds, "Master seed")->delimiter(',');
  sub.add_option("--reps", raw.reps, "Replications per cell");
  sub.add_option("--feedback-delay", raw.feedback_delay, "Slots before the sender learns the decoding state");
  sub.add_option("--drain-cap", raw.drain_cap, "Slots allowed after the last source (default: automatic)");
  sub.add_option("--trace", raw.trace_path, "Replay losses from a D/L trace file");
  sub.add_option("--out", raw.out, "Output prefix: writes PREFIX.csv and PREFIX.json");
}

void
build(app_bundle& b, raw_options& raw)
{
  b.app.require_subcommand(1);
  b.app.set_help_flag("-h,--help", "Print help");

  b.run = b.app.add_subcommand("run", "Run one configuration");
  add_sim_options(*b.run, raw);
  b.grid = b.app.add_subcommand("grid", "Run the cartesian product of repeated options");
  add_sim_options(*b.grid, raw);

  b.probe = b.app.add_subcommand("probe", "Estimate how often random square matrices are invertible");
  b.probe->add_option("--field-size", raw.probe_q, "Field size q (power of two, 2..256)");
  b.probe->add_option("--m", raw.probe_m, "Matrix dimension");
  b.probe->add_option("--trials", raw.probe_trials, "Random matrices to draw");
  b.probe->add_option("--seed", raw.probe_seed, "Seed");
  b.probe->add_option("--out", raw.out, "Output prefix: writes PREFIX.csv");

  b.estimate = b.app.add_subcommand("estimate", "Fit a Gilbert channel to a D/L loss trace");
  b.estimate->add_option("trace", raw.estimate_path, "Trace file")->required();
}

template <typename T>
void
fill_default(std::vector<T>& values, T fallback)
{
  if (values.empty())
    values.push_back(fallback);
}

std::vector<channel::outcome>
load_trace(const std::string& path)
{
  std::ifstream in{path};
  if (!in)
    throw std::runtime_error("cannot open trace file '" + path + "'");
  auto trace = channel::read_trace(in);
  if (trace.empty())
    throw std::runtime_error("trace file '" + path + "' holds no slots");
  return trace;
}

std::string
hex(std::uint32_t v)
{
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << v;
  return os.str();
}

std::string
csv_escape(const std::string& field)
{
  if (field.find_first_of(",\"\n") == std::string::npos)
    return field;
  std::string out = "\"";
  for (char c : field)
  {
    if (c == '"')
      out += '"';
    out += c;
  }
  return out + "\"";
}

std::string
optional_number(const std::optional<std::uint64_t>& v)
{
  return v ? std::to_string(*v) : std::string{};
}

} // namespace

std::vector<sim::sim_config>
experiment_grid::cells() const
{
  std::vector<sim::sim_config> out;
  for (const auto& ch : channels)
    for (const auto& sc : schedulers)
      for (unsigned w : fields)
        for (std::size_t sz : sizes)
          for (std::uint64_t n : horizons)
            for (std::uint64_t seed : seeds)
            {
              sim::sim_config c;
              c.channel = ch;
              c.schedule = sc;
              c.field_w = w;
              c.poly = poly;
              c.sz = sz;
              c.packets = n;
              c.seed = seed;
              c.replications = reps;
              c.feedback_delay = feedback_delay;
              c.drain_cap = drain_cap;
              out.push_back(std::move(c));
            }
  return out;
}

std::string
usage()
{
  app_bundle b;
  raw_options raw;
  build(b, raw);
  return b.app.help();
}

experiment_grid
parse_args(const std::vector<std::string>& args)
{
  app_bundle b;
  raw_options raw;
  build(b, raw);

  try
  {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    b.app.parse(reversed);
  }
  catch (const CLI::CallForHelp&)
  {
    throw help_requested(b.app.help());
  }
  catch (const CLI::ParseError& e)
  {
    throw usage_error(e.what());
  }

  experiment_grid grid;
  if (b.run->parsed())
    grid.cmd = command::run;
  else if (b.grid->parsed())
    grid.cmd = command::grid;
  else if (b.probe->parsed())
    grid.cmd = command::probe;
  else
    grid.cmd = command::estimate;

  grid.out = raw.out;
  grid.probe_q = raw.probe_q;
  grid.probe_m = raw.probe_m;
  grid.probe_trials = raw.probe_trials;
  grid.seeds = raw.seeds;
  grid.estimate_path = raw.estimate_path;
  if (grid.cmd == command::probe)
  {
    fill_default(grid.seeds, std::uint64_t{raw.probe_seed});
    return grid;
  }
  if (grid.cmd == command::estimate)
    return grid;

  try
  {
    for (const auto& text : raw.channels)
      grid.channels.push_back(channel::parse(text));
    for (const auto& text : raw.schedulers)
      grid.schedulers.push_back(parse_schedule(text));
    if (!raw.poly.empty())
    {
      const std::string_view digits = std::string_view{raw.poly}.substr(raw.poly.rfind("0x", 0) == 0 ? 2 : 0);
      std::uint32_t value = 0;
      const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, 16);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size())
        throw spec_error("not a hexadecimal polynomial: '" + raw.poly + "'");
      grid.poly = value;
    }
  }
  catch (const spec_error& e)
  {
    throw usage_error(e.what());
  }

  fill_default(grid.channels, channel::params{channel::bernoulli{0.1}});
  fill_default(grid.schedulers, schedule_spec{random_schedule{rational::make(1667, 10000)}});
  grid.fields = raw.fields;
  fill_default(grid.fields, 8u);
  grid.sizes = raw.sizes;
  fill_default(grid.sizes, std::size_t{64});
  grid.horizons = raw.horizons;
  fill_default(grid.horizons, std::uint64_t{100000});
  fill_default(grid.seeds, std::uint64_t{1});
  grid.reps = raw.reps;
  grid.feedback_delay = raw.feedback_delay;
  if (raw.drain_cap > 0)
    grid.drain_cap = raw.drain_cap;
  grid.trace_path = raw.trace_path;

  if (grid.reps < 1)
    throw usage_error("--reps must be at least 1");
  if (grid.cmd == command::run && grid.cells().size() != 1)
    throw usage_error("'run' takes a single value per option; use 'grid' for several");
  for (const auto& c : grid.cells())
  {
    try
    {
      sim::validate(c);
    }
    catch (const std::invalid_argument& e)
    {
      throw usage_error(e.what());
    }
  }
  return grid;
}

std::vector<cell_result>
run_grid(const experiment_grid& grid, unsigned threads)
{
  std::vector<cell_result> results;
  for (auto& c : grid.cells())
    results.push_back({std::move(c), {}, std::nullopt});

  std::vector<channel::outcome> trace;
  if (!grid.trace_path.empty())
    trace = load_trace(grid.trace_path);

  std::vector<std::pair<std::size_t, unsigned>> tasks;
  for (std::size_t i = 0; i < results.size(); ++i)
  {
    results[i].config.trace = trace;
    results[i].reports.resize(results[i].config.replications);
    for (unsigned r = 0; r < results[i].config.replications; ++r)
      tasks.emplace_back(i, r);
  }

  std::vector<std::optional<std::string>> errors(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t t) {
    const auto [cell, rep] = tasks[t];
    try
    {
      results[cell].reports[rep] = sim::run_simulation(results[cell].config, rep);
    }
    catch (const std::exception& e)
    {
      errors[t] = e.what();
    }
  });

  for (std::size_t t = 0; t < tasks.size(); ++t)
    if (errors[t] && !results[tasks[t].first].error)
      results[tasks[t].first].error = *errors[t];
  for (auto& r : results)
  {
    r.config.trace.clear();
    if (r.error)
      r.reports.clear();
  }
  return results;
}

const std::vector<std::string>&
csv_columns()
{
  static const std::vector<std::string> columns = {
    "cell",          "rep",           "channel",        "scheduler",          "field_w",
    "poly",          "sz",            "packets",        "feedback_delay",     "seed",
    "drain_cap",     "trace",         "slots",          "repairs_sent",       "lost_sources",
    "recovered",     "undecoded",     "mean_delay_recovered", "mean_delay_all", "max_m",
    "mean_m",        "recurrence_mean", "mul_count",    "inv_count",          "dependent_repairs",
    "substitutions", "payload_mismatches",
  };
  return columns;
}

std::string
format_csv(const std::vector<cell_result>& results, const experiment_grid& grid)
{
  std::ostringstream os;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i)
    os << (i ? "," : "") << cols[i];
  os << '\n';

  for (std::size_t cell = 0; cell < results.size(); ++cell)
  {
    const auto& c = results[cell].config;
    for (std::size_t rep = 0; rep < results[cell].reports.size(); ++rep)
    {
      const auto& r = results[cell].reports[rep];
      const std::vector<std::string> fields = {
        std::to_string(cell),
        std::to_string(rep),
        channel::to_string(c.channel),
        to_string(c.schedule),
        std::to_string(c.field_w),
        c.poly ? hex(*c.poly) : std::string{},
        std::to_string(c.sz),
        std::to_string(c.packets),
        std::to_string(c.feedback_delay),
        std::to_string(c.seed),
        optional_number(c.drain_cap),
        grid.trace_path,
        std::to_string(r.slots),
        std::to_string(r.repairs_sent),
        std::to_string(r.lost_sources),
        std::to_string(r.recovered),
        std::to_string(r.undecoded),
        format_double(r.mean_delay_recovered),
        format_double(r.mean_delay_all),
        std::to_string(r.max_m),
        format_double(r.mean_m),
        format_double(r.mean_recurrence),
        std::to_string(r.decoder_ops.mul_count),
        std::to_string(r.decoder_ops.inv_count),
        std::to_string(r.dependent_repairs),
        std::to_string(r.substitutions),
        std::to_string(r.payload_mismatches),
      };
      for (std::size_t i = 0; i < fields.size(); ++i)
        os << (i ? "," : "") << csv_escape(fields[i]);
      os << '\n';
    }
  }
  return os.str();
}

std::vector<std::string>
split_csv_line(std::string_view line)
{
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    const char c = line[i];
    if (quoted)
    {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"')
      {
        out.back() += '"';
        ++i;
      }
      else if (c == '"')
        quoted = false;
      else
        out.back() += c;
    }
    else if (c == '"')
      quoted = true;
    else if (c == ',')
      out.emplace_back();
    else if (c != '\n' && c != '\r')
      out.back() += c;
  }
  if (quoted)
    throw std::invalid_argument("unterminated quote in CSV line");
  return out;
}

csv_record
parse_csv_row(std::string_view line)
{
  const auto fields = split_csv_line(line);
  const auto& cols = csv_columns();
  if (fields.size() != cols.size())
    throw std::invalid_argument("CSV row has " + std::to_string(fields.size()) + " fields, expected " +
                                std::to_string(cols.size()));
  auto field = [&](std::string_view name) -> const std::string& {
    const auto it = std::find(cols.begin(), cols.end(), name);
    return fields[static_cast<std::size_t>(it - cols.begin())];
  };

  csv_record rec;
  rec.cell = parse_unsigned(field("cell"));
  rec.rep = static_cast<unsigned>(parse_unsigned(field("rep")));
  rec.config.channel = channel::parse(field("channel"));
  rec.config.schedule = parse_schedule(field("scheduler"));
  rec.config.field_w = static_cast<unsigned>(parse_unsigned(field("field_w")));
  if (const auto& p = field("poly"); !p.empty())
    rec.config.poly = static_cast<std::uint32_t>(std::stoul(p, nullptr, 16));
  rec.config.sz = parse_unsigned(field("sz"));
  rec.config.packets = parse_unsigned(field("packets"));
  rec.config.feedback_delay = parse_unsigned(field("feedback_delay"));
  rec.config.seed = parse_unsigned(field("seed"));
  if (const auto& d = field("drain_cap"); !d.empty())
    rec.config.drain_cap = parse_unsigned(d);
  rec.trace_path = field("trace");
  return rec;
}

std::string
format_summary(const std::vector<cell_result>& results)
{
  using nlohmann::json;
  json cells = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < results.size(); ++i)
  {
    const auto& res = results[i];
    const auto& c = res.config;
    json cell = {
      {"cell", i},
      {"channel", channel::to_string(c.channel)},
      {"scheduler", to_string(c.schedule)},
      {"nominal_ratio", ratio_of(c.schedule).to_string()},
      {"stationary_loss_rate", channel::stationary_loss_rate(c.channel)},
      {"field_w", c.field_w},
      {"sz", c.sz},
      {"packets", c.packets},
      {"seed", c.seed},
      {"feedback_delay", c.feedback_delay},
      {"replications", c.replications},
    };
    if (res.error)
    {
      all_ok = false;
      cell["status"] = "failed";
      cell["error"] = *res.error;
      cells.push_back(std::move(cell));
      continue;
    }
    cell["status"] = "ok";

    auto stat = [&](auto metric) {
      std::vector<double> values;
      for (const auto& r : res.reports)
        values.push_back(static_cast<double>(metric(r)));
      const auto s = sim::summarize(values);
      return json{{"mean", s.mean}, {"standard_error", s.standard_error}};
    };
    using report = sim::sim_report;
    cell["metrics"] = {
      {"mean_delay_recovered", stat([](const report& r) { return r.mean_delay_recovered; })},
      {"mean_delay_all", stat([](const report& r) { return r.mean_delay_all; })},
      {"max_m", stat([](const report& r) { return r.max_m; })},
      {"mean_m", stat([](const report& r) { return r.mean_m; })},
      {"recurrence_mean", stat([](const report& r) { return r.mean_recurrence; })},
      {"mul_count", stat([](const report& r) { return r.decoder_ops.mul_count; })},
      {"undecoded", stat([](const report& r) { return r.undecoded; })},
      {"recovered", stat([](const report& r) { return r.recovered; })},
      {"repair_fraction", stat([](const report& r) {
         return static_cast<double>(r.repairs_sent) / static_cast<double>(r.repairs_sent + r.packets);
       })},
    };
    std::uint64_t mismatches = 0;
    for (const auto& r : res.reports)
      mismatches += r.payload_mismatches;
    cell["payload_mismatches"] = mismatches;
    cells.push_back(std::move(cell));
  }
  return json{{"all_succeeded", all_ok}, {"cells", std::move(cells)}}.dump(2) + "\n";
}

void
emit_results(const std::vector<cell_result>& results, const experiment_grid& grid, std::ostream& stdout_stream)
{
  const std::string csv = format_csv(results, grid);
  if (grid.out.empty())
  {
    stdout_stream << csv;
    return;
  }
  auto write = [](const std::string& path, const std::string& text) {
    std::ofstream file{path, std::ios::binary | std::ios::trunc};
    if (!file)
      throw std::runtime_error("cannot write '" + path + "'");
    file << text;
    file.flush();
    if (!file)
      throw std::runtime_error("error while writing '" + path + "'");
  };
  write(grid.out + ".csv", csv);
  write(grid.out + ".json", format_summary(results));
}

unsigned
threads_from_environment()
{
  const char* value = std::getenv("OTF_FEC_THREADS");
  if (value == nullptr || *value == '\0')
    return 0;
  try
  {
    return static_cast<unsigned>(parse_unsigned(value));
  }
  catch (const spec_error&)
  {
    return 0;
  }
}

namespace {

int
run_probe(const experiment_grid& grid, std::ostream& out)
{
  const auto r = sim::singularity_probe(grid.probe_q, grid.probe_m, grid.probe_trials, grid.seeds.front());
  std::ostringstream os;
  os << "q,m,trials,invertible,rate,standard_error,expected\n"
     << r.q << ',' << r.m << ',' << r.trials << ',' << r.invertible << ',' << format_double(r.rate) << ','
     << format_double(r.standard_error) << ',' << format_double(sim::invertible_probability(r.q, r.m)) << '\n';
  if (grid.out.empty())
    out << os.str();
  else
  {
    std::ofstream file{grid.out + ".csv", std::ios::binary | std::ios::trunc};
    if (!(file << os.str()))
      throw std::runtime_error("cannot write '" + grid.out + ".csv'");
  }
  return success;
}

int
run_estimate(const experiment_grid& grid, std::ostream& out)
{
  const auto trace = load_trace(grid.estimate_path);
  const auto est = channel::estimate_gilbert(trace);
  out << "slots,loss_rate,p_gb,p_bg,loss_runs,delivery_runs\n"
      << trace.size() << ',' << format_double(est.loss_rate) << ',' << format_double(est.params.p_gb) << ','
      << format_double(est.params.p_bg) << ',' << est.loss_runs << ',' << est.delivery_runs << '\n';
  return success;
}

} // namespace

int
run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  experiment_grid grid;
  try
  {
    grid = parse_args(args);
  }
  catch (const help_requested& h)
  {
    out << h.what();
    return success;
  }
  catch (const usage_error& e)
  {
    err << "otf-fec: " << e.what() << "\n\n" << usage();
    return usage_failure;
  }

  try
  {
    switch (grid.cmd)
    {
      case command::probe:
        return run_probe(grid, out);
      case command::estimate:
        return run_estimate(grid, out);
      case command::run:
      case command::grid:
        break;
    }
    const auto results = run_grid(grid, threads_from_environment());
    emit_results(results, grid, out);
    bool ok = true;
    for (const auto& r : results)
      if (r.error)
      {
        ok = false;
        err << "otf-fec: cell failed: " << *r.error << '\n';
      }
    return ok ? success : runtime_failure;
  }
  catch (const std::exception& e)
  {
    err << "otf-fec: " << e.what() << '\n';
    return runtime_failure;
  }
}

} // namespace otf::cli
