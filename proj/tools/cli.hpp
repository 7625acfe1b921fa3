#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qbd/master_equation.hpp"
#include "qbd/physics.hpp"
#include "qbd/sweep.hpp"
#include "qbd/trajectory.hpp"

namespace qbd::cli {

enum class Command { steady, sweep, trajectory, passage };
enum class OutputFormat { csv, csv_svg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPhysics = 3;

// Fully resolved command line. Defaults reproduce the toroidal-cavity
// parameter set: 21.456 GHz, Q = 2e9, T = 1.4 K, r = 3000 atoms/s.
struct RunConfig {
  Command command = Command::steady;
  PhysicalParams params;
  std::size_t n_max = kDefaultNMax;
  double phi_min = 0.05;
  double phi_max = 3.0;
  std::size_t steps = 600;
  double duration = 10.0;
  std::uint64_t seed = 42;
  ArrivalModel arrival = ArrivalModel::poisson;
  std::size_t initial_n = 0;
  std::size_t record_stride = 1;
  std::optional<std::string> output;
  OutputFormat format = OutputFormat::csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resolves a RunConfig from command-line arguments (command first, program
// name excluded). Precedence: flags, then the --config file (or
// `default_config_text` when no --config is given), then built-in defaults.
RunConfig parse_config(std::span<const std::string> args,
                       std::optional<std::string> default_config_text = std::nullopt);

// Applies `key = value` lines on top of `base`. '#' starts a comment.
RunConfig apply_config_text(std::string_view text, RunConfig base = {});

// Reads back the header that every output file starts with.
RunConfig parse_config_header(std::string_view text);

// Throws UsageError if any field violates its domain.
void validate(const RunConfig& config);

PhaseSweepSpec sweep_spec(const RunConfig& config);
TrajectoryConfig trajectory_config(const RunConfig& config);

std::string_view version();
std::string format_number(double value);
std::string config_header(const RunConfig& config);

void write_steady_csv(std::ostream& out, const RunConfig& config, const PhotonDistribution& p);
void write_sweep_csv(std::ostream& out, const RunConfig& config, std::span<const SweepRow> rows);
void write_trajectory_csv(std::ostream& out, const RunConfig& config,
                          const TrajectoryRecord& record);
void write_passage_csv(std::ostream& out, const RunConfig& config);

// Executes the command and returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// argv-level entry point: parsing, QBD_SIM_CONFIG, output files, exit codes.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbd::cli
