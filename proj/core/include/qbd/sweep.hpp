#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbd/master_equation.hpp"
#include "qbd/physics.hpp"

namespace qbd {

// Steady-state photon statistics over a uniform grid of Rabi phases.
// params.phase is ignored.
struct PhaseSweepSpec {
  PhysicalParams params;
  double phi_min = 0.05;
  double phi_max = 3.0;
  std::size_t steps = 600;
  std::size_t n_max = kDefaultNMax;
};

void validate(const PhaseSweepSpec& spec);

// Grid point i of the sweep, phi_min + i (phi_max - phi_min) / (steps - 1).
double grid_phase(const PhaseSweepSpec& spec, std::size_t i);

struct SweepRow {
  double phi;
  double mean_n;
  std::optional<double> fano;
  double tail_mass;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

// Rows come back in ascending phi. `workers` == 0 uses the hardware
// concurrency; results do not depend on the worker count.
std::vector<SweepRow> run_sweep(const PhaseSweepSpec& spec, unsigned workers = 0);

enum class ExtremumKind { min, max };

struct Extremum {
  double phi;
  ExtremumKind kind;
  double value;
};

struct ExtremaResult {
  std::vector<Extremum> extrema;
  bool insufficient_data = false;  // fewer than three defined fano values
};

// Interior extrema of the fano column by three-point comparison over rows
// with a defined fano factor. On plateaus the smallest phi wins.
ExtremaResult find_local_extrema(std::span<const SweepRow> rows);

}  // namespace qbd
