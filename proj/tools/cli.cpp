#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "qbd/errors.hpp"
#include "svg.hpp"

#ifndef QBD_VERSION
#define QBD_VERSION "0.0.0"
#endif

namespace qbd::cli {

namespace {

class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

double parse_double(std::string_view key, std::string_view token) {
  double v = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (token.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw UsageError("invalid number " + quoted(token) + " for --" + std::string(key));
  return v;
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view token) {
  std::uint64_t v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (token.empty() || ec != std::errc{} || ptr != end)
    throw UsageError("invalid integer " + quoted(token) + " for --" + std::string(key));
  return v;
}

void require(bool ok, std::string_view key, std::string_view token, std::string_view rule) {
  if (!ok)
    throw UsageError("--" + std::string(key) + " " + std::string(token) + ": " +
                     std::string(rule));
}

std::string_view command_name(Command c) {
  switch (c) {
    case Command::steady: return "steady";
    case Command::sweep: return "sweep";
    case Command::trajectory: return "trajectory";
    case Command::passage: return "passage";
  }
  return "steady";
}

Command parse_command(std::string_view token) {
  for (Command c : {Command::steady, Command::sweep, Command::trajectory, Command::passage})
    if (command_name(c) == token) return c;
  throw UsageError("unknown command " + quoted(token) +
                   " (expected steady, sweep, trajectory or passage)");
}

std::string integer_text(std::uint64_t v) { return std::to_string(v); }

struct Key {
  std::string_view name;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::optional<std::string>(const RunConfig&)> get;
};

// Every configurable field, in header order. Names double as long flags and
// config-file keys.
const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"frequency-hz",
       [](RunConfig& c, std::string_view v) {
         c.params.frequency = parse_double("frequency-hz", v);
         require(c.params.frequency > 0, "frequency-hz", v, "frequency must be > 0");
       },
       [](const RunConfig& c) { return format_number(c.params.frequency); }},
      {"q-factor",
       [](RunConfig& c, std::string_view v) {
         c.params.q_factor = parse_double("q-factor", v);
         require(c.params.q_factor > 0, "q-factor", v, "Q must be > 0");
       },
       [](const RunConfig& c) { return format_number(c.params.q_factor); }},
      {"temperature-k",
       [](RunConfig& c, std::string_view v) {
         c.params.temperature = parse_double("temperature-k", v);
         require(c.params.temperature >= 0, "temperature-k", v, "temperature must be >= 0");
       },
       [](const RunConfig& c) { return format_number(c.params.temperature); }},
      {"atom-rate",
       [](RunConfig& c, std::string_view v) {
         c.params.atom_rate = parse_double("atom-rate", v);
         require(c.params.atom_rate >= 0, "atom-rate", v, "atom rate must be >= 0");
       },
       [](const RunConfig& c) { return format_number(c.params.atom_rate); }},
      {"phi",
       [](RunConfig& c, std::string_view v) {
         c.params.phase = parse_double("phi", v);
         require(c.params.phase >= 0, "phi", v, "Rabi phase must be >= 0");
       },
       [](const RunConfig& c) { return format_number(c.params.phase); }},
      {"n-max",
       [](RunConfig& c, std::string_view v) {
         c.n_max = parse_unsigned("n-max", v);
         require(c.n_max >= 2, "n-max", v, "n_max must be >= 2");
       },
       [](const RunConfig& c) { return integer_text(c.n_max); }},
      {"phi-min",
       [](RunConfig& c, std::string_view v) {
         c.phi_min = parse_double("phi-min", v);
         require(c.phi_min >= 0, "phi-min", v, "phi_min must be >= 0");
       },
       [](const RunConfig& c) { return format_number(c.phi_min); }},
      {"phi-max",
       [](RunConfig& c, std::string_view v) {
         c.phi_max = parse_double("phi-max", v);
         require(c.phi_max > 0, "phi-max", v, "phi_max must be > 0");
       },
       [](const RunConfig& c) { return format_number(c.phi_max); }},
      {"steps",
       [](RunConfig& c, std::string_view v) {
         c.steps = parse_unsigned("steps", v);
         require(c.steps >= 2, "steps", v, "steps must be >= 2");
       },
       [](const RunConfig& c) { return integer_text(c.steps); }},
      {"duration-s",
       [](RunConfig& c, std::string_view v) {
         c.duration = parse_double("duration-s", v);
         require(c.duration > 0, "duration-s", v, "duration must be > 0");
       },
       [](const RunConfig& c) { return format_number(c.duration); }},
      {"seed", [](RunConfig& c, std::string_view v) { c.seed = parse_unsigned("seed", v); },
       [](const RunConfig& c) { return integer_text(c.seed); }},
      {"arrival",
       [](RunConfig& c, std::string_view v) {
         if (v == "poisson")
           c.arrival = ArrivalModel::poisson;
         else if (v == "regular")
           c.arrival = ArrivalModel::regular;
         else
           throw UsageError("invalid arrival model " + quoted(v) + " (poisson|regular)");
       },
       [](const RunConfig& c) {
         return std::string(c.arrival == ArrivalModel::poisson ? "poisson" : "regular");
       }},
      {"initial-n",
       [](RunConfig& c, std::string_view v) { c.initial_n = parse_unsigned("initial-n", v); },
       [](const RunConfig& c) { return integer_text(c.initial_n); }},
      {"record-stride",
       [](RunConfig& c, std::string_view v) {
         c.record_stride = parse_unsigned("record-stride", v);
         require(c.record_stride >= 1, "record-stride", v, "record stride must be >= 1");
       },
       [](const RunConfig& c) { return integer_text(c.record_stride); }},
      {"output", [](RunConfig& c, std::string_view v) { c.output = std::string(v); },
       [](const RunConfig& c) { return c.output; }},
      {"format",
       [](RunConfig& c, std::string_view v) {
         if (v == "csv")
           c.format = OutputFormat::csv;
         else if (v == "csv+svg")
           c.format = OutputFormat::csv_svg;
         else
           throw UsageError("invalid format " + quoted(v) + " (csv|csv+svg)");
       },
       [](const RunConfig& c) {
         return std::string(c.format == OutputFormat::csv ? "csv" : "csv+svg");
       }},
  };
  return table;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string svg_path(const std::string& csv_path) {
  const std::string ext = ".csv";
  if (csv_path.size() > ext.size() && csv_path.ends_with(ext))
    return csv_path.substr(0, csv_path.size() - ext.size()) + ".svg";
  return csv_path + ".svg";
}

}  // namespace

std::string_view version() { return QBD_VERSION; }

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

RunConfig apply_config_text(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(line_no) + ": expected key = value, got " +
                       quoted(line));
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key == "command") {
      base.command = parse_command(value);
    } else if (const Key* k = find_key(key)) {
      k->set(base, value);
    } else {
      throw UsageError("config line " + std::to_string(line_no) + ": unknown key " + quoted(key));
    }
  }
  return base;
}

RunConfig parse_config_header(std::string_view text) {
  std::string body;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.starts_with("# ")) break;
    const std::string_view content = std::string_view(line).substr(2);
    if (content.find(" = ") == std::string_view::npos) continue;
    const auto key = trim(content.substr(0, content.find('=')));
    if (key == "rng-algorithm") continue;
    body.append(content).push_back('\n');
  }
  return apply_config_text(body);
}

void validate(const RunConfig& c) {
  if (c.command == Command::sweep && !(c.phi_min < c.phi_max))
    throw UsageError("--phi-min " + format_number(c.phi_min) + " must be below --phi-max " +
                     format_number(c.phi_max));
  if (c.command == Command::trajectory && c.initial_n >= c.n_max)
    throw UsageError("--initial-n " + std::to_string(c.initial_n) + " must be below --n-max " +
                     std::to_string(c.n_max));
  if (c.format == OutputFormat::csv_svg && !c.output)
    throw UsageError("--format csv+svg needs --output");
  try {
    qbd::validate(c.params);
  } catch (const ParameterError& e) {
    throw UsageError(e.what());
  }
}

RunConfig parse_config(std::span<const std::string> args,
                       std::optional<std::string> default_config_text) {
  CLI::App app{"Quantum bit detector simulator", "qbd-sim"};
  app.set_version_flag("--version", std::string(version()));
  std::string command;
  app.add_option("command", command, "steady | sweep | trajectory | passage")->required();
  std::map<std::string, std::string, std::less<>> given;
  std::map<std::string, CLI::Option*, std::less<>> options;
  for (const auto& k : keys()) {
    const std::string name(k.name);
    options[name] = app.add_option("--" + name, given[name]);
  }
  std::string config_path;
  auto* config_opt = app.add_option("--config", config_path, "flat key = value config file");

  std::vector<const char*> argv{"qbd-sim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(std::string(version()) + "\n");
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig config;
  std::optional<std::string> file_text =
      config_opt->count() > 0 ? std::optional(read_file(config_path)) : default_config_text;
  if (file_text) config = apply_config_text(*file_text, config);
  config.command = parse_command(command);
  for (const auto& k : keys()) {
    const auto& name = std::string(k.name);
    if (options[name]->count() > 0) k.set(config, given[name]);
  }
  validate(config);
  return config;
}

PhaseSweepSpec sweep_spec(const RunConfig& c) {
  return {c.params, c.phi_min, c.phi_max, c.steps, c.n_max};
}

TrajectoryConfig trajectory_config(const RunConfig& c) {
  TrajectoryConfig t;
  t.params = c.params;
  t.n_max = c.n_max;
  t.duration = c.duration;
  t.seed = c.seed;
  t.arrival_model = c.arrival;
  t.initial_n = c.initial_n;
  t.record_stride = c.record_stride;
  return t;
}

std::string config_header(const RunConfig& c) {
  std::string h = "# qbd-sim " + std::string(version()) + "\n";
  h += "# command = " + std::string(command_name(c.command)) + "\n";
  for (const auto& k : keys())
    if (auto v = k.get(c)) h += "# " + std::string(k.name) + " = " + *v + "\n";
  if (c.command == Command::trajectory)
    h += "# rng-algorithm = " + std::string(kRngAlgorithm) + "\n";
  return h;
}

void write_steady_csv(std::ostream& out, const RunConfig& c, const PhotonDistribution& p) {
  const FieldStatistics stats = statistics(p);
  out << config_header(c) << "n,p\n";
  for (std::size_t n = 0; n < p.size(); ++n) out << n << ',' << format_number(p[n]) << '\n';
  out << "# mean_n=" << format_number(stats.mean_n) << '\n';
  out << "# fano=" << (stats.fano ? format_number(*stats.fano) : "undefined") << '\n';
  out << "# tail_mass=" << format_number(p.tail_mass()) << '\n';
}

void write_sweep_csv(std::ostream& out, const RunConfig& c, std::span<const SweepRow> rows) {
  out << config_header(c) << "phi,mean_n,fano,fano_defined,tail_mass\n";
  for (const auto& r : rows) {
    out << format_number(r.phi) << ',' << format_number(r.mean_n) << ','
        << (r.fano ? format_number(*r.fano) : "") << ',' << (r.fano ? 1 : 0) << ','
        << format_number(r.tail_mass) << '\n';
  }
}

void write_trajectory_csv(std::ostream& out, const RunConfig& c, const TrajectoryRecord& record) {
  out << config_header(c) << "time_s,true_n,filter_mean,filter_std,last_outcome\n";
  for (const auto& s : record.samples) {
    out << format_number(s.time) << ',' << s.true_n << ',' << format_number(s.filter_mean) << ','
        << format_number(s.filter_std) << ','
        << (s.last_outcome ? outcome_letter(*s.last_outcome) : '-') << '\n';
  }
}

void write_passage_csv(std::ostream& out, const RunConfig& c) {
  out << config_header(c) << "n,w_f,w_g,w_e\n";
  for (std::size_t n = 0; n <= c.n_max; ++n) {
    const auto w = passage_weights(n, c.params.phase);
    out << n << ',' << format_number(w.w_f) << ',' << format_number(w.w_g) << ','
        << format_number(w.w_e) << '\n';
  }
}

namespace {

void emit(const RunConfig& c, std::ostream& out) {
  switch (c.command) {
    case Command::steady: {
      const auto gen = build_generator(c.params, derive_rates(c.params), c.n_max);
      write_steady_csv(out, c, steady_state_analytic(gen));
      return;
    }
    case Command::sweep: {
      const auto rows = run_sweep(sweep_spec(c));
      write_sweep_csv(out, c, rows);
      if (c.format == OutputFormat::csv_svg) {
        Series mean{"<n>", {}, {}}, fano{"Fano factor Q_f", {}, {}};
        for (const auto& r : rows) {
          mean.x.push_back(r.phi);
          mean.y.push_back(r.mean_n);
          if (r.fano) {
            fano.x.push_back(r.phi);
            fano.y.push_back(*r.fano);
          }
        }
        std::ofstream svg(svg_path(*c.output));
        write_svg(svg, "Steady state vs Rabi phase", "phi [rad]", {fano, mean});
        if (!svg) throw IoError("cannot write " + svg_path(*c.output));
      }
      return;
    }
    case Command::trajectory: {
      const auto record = simulate(trajectory_config(c));
      write_trajectory_csv(out, c, record);
      if (c.format == OutputFormat::csv_svg) {
        Series atoms{"detected atom state (0=f, 1=g, 2=e)", {}, {}};
        Series mean{"filter <n>", {}, {}}, sigma{"filter sigma_n", {}, {}};
        for (const auto& s : record.samples) {
          if (s.last_outcome) {
            atoms.x.push_back(s.time);
            atoms.y.push_back(static_cast<double>(*s.last_outcome));
          }
          mean.x.push_back(s.time);
          mean.y.push_back(s.filter_mean);
          sigma.x.push_back(s.time);
          sigma.y.push_back(s.filter_std);
        }
        std::ofstream svg(svg_path(*c.output));
        write_svg(svg, "Quantum bit detection trajectory", "t [s]", {atoms, mean, sigma});
        if (!svg) throw IoError("cannot write " + svg_path(*c.output));
      }
      return;
    }
    case Command::passage:
      write_passage_csv(out, c);
      return;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output) {
      std::ofstream file(*config.output, std::ios::binary);
      if (!file) throw IoError("cannot open " + *config.output + " for writing");
      emit(config, file);
      file.flush();
      if (!file) throw IoError("failed writing " + *config.output);
    } else {
      emit(config, out);
      out.flush();
    }
  } catch (const IoError& e) {
    err << "qbd-sim: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qbd::Error& e) {
    err << "qbd-sim: " << e.what() << '\n';
    return kExitPhysics;
  }
  return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> env_text;
    if (const char* path = std::getenv("QBD_SIM_CONFIG"); path && *path)
      env_text = read_file(path);
    config = parse_config(args, env_text);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qbd-sim: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "qbd-sim: I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  return run(config, out, err);
}

}  // namespace qbd::cli
