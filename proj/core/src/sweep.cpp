#include "qbd/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "qbd/errors.hpp"

namespace qbd {

void validate(const PhaseSweepSpec& spec) {
  PhysicalParams p = spec.params;
  p.phase = 0.0;
  validate(p);
  if (!std::isfinite(spec.phi_min) || !std::isfinite(spec.phi_max) || spec.phi_min < 0.0 ||
      !(spec.phi_min < spec.phi_max))
    throw ParameterError("sweep needs 0 <= phi_min < phi_max");
  if (spec.steps < 2) throw ParameterError("sweep needs at least 2 steps");
  if (spec.n_max < 2) throw ParameterError("n_max must be >= 2");
}

double grid_phase(const PhaseSweepSpec& spec, std::size_t i) {
  if (i + 1 == spec.steps) return spec.phi_max;
  return spec.phi_min +
         static_cast<double>(i) * (spec.phi_max - spec.phi_min) / static_cast<double>(spec.steps - 1);
}

namespace {

SweepRow evaluate(const PhaseSweepSpec& spec, const DerivedRates& rates, double phi) {
  PhysicalParams params = spec.params;
  params.phase = phi;
  PhotonDistribution p = [&] {
    try {
      return steady_state_analytic(build_generator(params, rates, spec.n_max));
    } catch (const TruncationError& e) {
      throw TruncationError("at phi=" + std::to_string(phi) + ": " + e.what());
    }
  }();
  const FieldStatistics stats = statistics(p);
  return {phi, stats.mean_n, stats.fano, p.tail_mass()};
}

}  // namespace

std::vector<SweepRow> run_sweep(const PhaseSweepSpec& spec, unsigned workers) {
  validate(spec);
  PhysicalParams base = spec.params;
  base.phase = 0.0;
  const DerivedRates rates = derive_rates(base);

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, spec.steps));

  std::vector<SweepRow> rows(spec.steps);
  std::vector<std::exception_ptr> failures(spec.steps);
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < spec.steps; i += workers) {
      try {
        rows[i] = evaluate(spec, rates, grid_phase(spec, i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
  return rows;
}

ExtremaResult find_local_extrema(std::span<const SweepRow> rows) {
  std::vector<const SweepRow*> defined;
  for (const auto& r : rows)
    if (r.fano) defined.push_back(&r);

  ExtremaResult result;
  if (defined.size() < 3) {
    result.insufficient_data = true;
    return result;
  }
  for (std::size_t i = 1; i + 1 < defined.size(); ++i) {
    const double prev = *defined[i - 1]->fano;
    const double here = *defined[i]->fano;
    const double next = *defined[i + 1]->fano;
    if (here > prev && here >= next)
      result.extrema.push_back({defined[i]->phi, ExtremumKind::max, here});
    else if (here < prev && here <= next)
      result.extrema.push_back({defined[i]->phi, ExtremumKind::min, here});
  }
  return result;
}

}  // namespace qbd
