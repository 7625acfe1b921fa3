#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbd/photon_distribution.hpp"
#include "qbd/physics.hpp"

namespace qbd {

inline constexpr std::size_t kDefaultNMax = 40;
inline constexpr double kDefaultTailTolerance = 1e-10;
inline constexpr double kFanoEpsilon = 1e-9;

// Birth-death generator of the coarse-grained cavity master equation on
// photon levels 0..n_max:
//
//   dp(n)/dt = up(n-1) p(n-1) + down(n+1) p(n+1) - [up(n) + down(n)] p(n)
//
// with up(n) = gamma nbar (n+1) and
//      down(n) = (r/4) sin^2(2 phase sqrt n) + gamma (nbar+1) n.
//
// The atom-absorption inflow from n+1 uses sin^2(2 phase sqrt(n+1)), the same
// factor as the outflow from level n+1. Printing that inflow as
// sin^2(phase sqrt(n+1)) breaks probability conservation and disagrees with
// the product-form steady state; the paired form restores both.
//
// up(n_max) is zero so the truncated chain conserves probability exactly.
class BirthDeathGenerator {
 public:
  BirthDeathGenerator(std::vector<double> up_rates, std::vector<double> down_rates);

  std::size_t n_max() const noexcept { return up_.size() - 1; }
  std::span<const double> up_rates() const noexcept { return up_; }
  std::span<const double> down_rates() const noexcept { return down_; }
  double up(std::size_t n) const { return up_[n]; }
  double down(std::size_t n) const { return down_[n]; }
  double max_exit_rate() const noexcept { return max_exit_; }

  // out = G p.
  void apply(std::span<const double> p, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> p) const;

  // Row-major (n_max+1)^2 matrix, entry [to * size + from].
  std::vector<double> dense() const;

 private:
  std::vector<double> up_;
  std::vector<double> down_;
  std::vector<double> exit_;
  double max_exit_ = 0.0;
};

BirthDeathGenerator build_generator(const PhysicalParams& params, const DerivedRates& rates,
                                    std::size_t n_max = kDefaultNMax);

// Heat-bath terms only (no atoms).
BirthDeathGenerator thermal_generator(const DerivedRates& rates, std::size_t n_max = kDefaultNMax);

// One atom passage traced over the atom:
//   p'(n) = [cos^2(phase sqrt n) + sin^4(phase sqrt n)] p(n)
//         + sin^2(2 phase sqrt(n+1)) / 4 * p(n+1).
PhotonDistribution apply_atom_map(const PhotonDistribution& p, double phase);

// Kernel of the generator from detailed balance,
//   p(n) = p(0) prod_{m=1..n} up(m-1) / down(m),
// evaluated in log space. Throws TruncationError if p(n_max) >= tail_tolerance.
PhotonDistribution steady_state_analytic(const BirthDeathGenerator& gen,
                                         double tail_tolerance = kDefaultTailTolerance);

struct EvolveOptions {
  // Upper bound on the RK4 step; defaults to 0.1 / max_exit_rate.
  std::optional<double> max_step;
  double tail_tolerance = kDefaultTailTolerance;
  std::size_t max_steps = 2'000'000'000;
};

// Integrates dp/dt = G p over `duration` seconds with fixed-step classical
// Runge-Kutta. duration == 0 returns p0 unchanged.
PhotonDistribution evolve(const PhotonDistribution& p0, const BirthDeathGenerator& gen,
                          double duration, const EvolveOptions& options = {});

struct FieldStatistics {
  double mean_n;
  double variance;
  double std_dev;
  std::optional<double> fano;  // empty when mean_n < kFanoEpsilon
};

FieldStatistics statistics(const PhotonDistribution& p, double fano_epsilon = kFanoEpsilon);

}  // namespace qbd
