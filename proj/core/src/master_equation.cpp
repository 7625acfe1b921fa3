#include "qbd/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qbd/errors.hpp"

namespace qbd {

BirthDeathGenerator::BirthDeathGenerator(std::vector<double> up_rates,
                                         std::vector<double> down_rates)
    : up_(std::move(up_rates)), down_(std::move(down_rates)) {
  if (up_.size() != down_.size() || up_.size() < 2)
    throw ContractError("generator needs matching rate vectors with at least two levels");
  for (std::size_t n = 0; n < up_.size(); ++n) {
    if (!(up_[n] >= 0.0) || !(down_[n] >= 0.0) || !std::isfinite(up_[n]) ||
        !std::isfinite(down_[n]))
      throw ContractError("generator rates must be finite and non-negative (n=" +
                          std::to_string(n) + ")");
  }
  if (down_.front() != 0.0) throw ContractError("down rate out of vacuum must be zero");
  if (up_.back() != 0.0) throw ContractError("up rate out of the top level must be zero");
  exit_.resize(up_.size());
  for (std::size_t n = 0; n < up_.size(); ++n) {
    exit_[n] = up_[n] + down_[n];
    max_exit_ = std::max(max_exit_, exit_[n]);
  }
}

void BirthDeathGenerator::apply(std::span<const double> p, std::span<double> out) const {
  const std::size_t last = up_.size() - 1;
  const double* up = up_.data();
  const double* down = down_.data();
  const double* exit = exit_.data();
  out[0] = -exit[0] * p[0] + down[1] * p[1];
  for (std::size_t n = 1; n < last; ++n)
    out[n] = -exit[n] * p[n] + up[n - 1] * p[n - 1] + down[n + 1] * p[n + 1];
  out[last] = -exit[last] * p[last] + up[last - 1] * p[last - 1];
}

std::vector<double> BirthDeathGenerator::apply(std::span<const double> p) const {
  std::vector<double> out(up_.size());
  apply(p, out);
  return out;
}

std::vector<double> BirthDeathGenerator::dense() const {
  const std::size_t size = up_.size();
  std::vector<double> m(size * size, 0.0);
  for (std::size_t n = 0; n < size; ++n) {
    m[n * size + n] = -exit_[n];
    if (n + 1 < size) m[(n + 1) * size + n] = up_[n];
    if (n > 0) m[(n - 1) * size + n] = down_[n];
  }
  return m;
}

BirthDeathGenerator build_generator(const PhysicalParams& params, const DerivedRates& rates,
                                    std::size_t n_max) {
  validate(params);
  if (n_max < 2) throw ParameterError("n_max must be >= 2");
  std::vector<double> up(n_max + 1, 0.0);
  std::vector<double> down(n_max + 1, 0.0);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    if (n < n_max) up[n] = rates.gamma * rates.nbar * (dn + 1.0);
    if (n > 0) {
      const double s = std::sin(2.0 * params.phase * std::sqrt(dn));
      down[n] = 0.25 * params.atom_rate * s * s + rates.gamma * (rates.nbar + 1.0) * dn;
    }
  }
  return BirthDeathGenerator(std::move(up), std::move(down));
}

BirthDeathGenerator thermal_generator(const DerivedRates& rates, std::size_t n_max) {
  PhysicalParams params;
  params.atom_rate = 0.0;
  params.phase = 0.0;
  return build_generator(params, rates, n_max);
}

PhotonDistribution apply_atom_map(const PhotonDistribution& p, double phase) {
  if (!std::isfinite(phase)) throw ParameterError("phase must be finite");
  const std::size_t last = p.n_max();
  std::vector<double> out(last + 1);
  OutcomeWeights here = passage_weights(0, phase);
  for (std::size_t n = 0; n <= last; ++n) {
    double v = (here.w_f + here.w_g) * p[n];
    if (n < last) {
      const OutcomeWeights above = passage_weights(n + 1, phase);
      v += above.w_e * p[n + 1];
      here = above;
    }
    out[n] = v;
  }
  return PhotonDistribution(std::move(out));
}

PhotonDistribution steady_state_analytic(const BirthDeathGenerator& gen, double tail_tolerance) {
  const std::size_t last = gen.n_max();
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_p(last + 1, neg_inf);
  log_p[0] = 0.0;
  for (std::size_t m = 1; m <= last; ++m) {
    if (gen.up(m - 1) == 0.0 || log_p[m - 1] == neg_inf) break;
    log_p[m] = log_p[m - 1] + std::log(gen.up(m - 1)) - std::log(gen.down(m));
  }
  const double peak = *std::max_element(log_p.begin(), log_p.end());
  std::vector<double> w(last + 1);
  for (std::size_t n = 0; n <= last; ++n) w[n] = std::exp(log_p[n] - peak);
  auto p = PhotonDistribution::normalize(std::move(w));
  if (!(p.tail_mass() < tail_tolerance))
    throw TruncationError("steady state has tail mass " + std::to_string(p.tail_mass()) +
                          " at n_max=" + std::to_string(last) + "; increase n_max");
  return p;
}

PhotonDistribution evolve(const PhotonDistribution& p0, const BirthDeathGenerator& gen,
                          double duration, const EvolveOptions& options) {
  if (p0.size() != gen.n_max() + 1)
    throw ContractError("distribution and generator truncation levels differ");
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw ContractError("evolve duration must be finite and >= 0");
  if (duration == 0.0) return p0;

  double max_step = options.max_step.value_or(
      gen.max_exit_rate() > 0.0 ? 0.1 / gen.max_exit_rate() : duration);
  if (!(max_step > 0.0)) throw IntegrationError("non-positive step bound", 0.0);
  const double wanted = std::ceil(duration / max_step);
  if (!(wanted <= static_cast<double>(options.max_steps)))
    throw IntegrationError("step size underflow: " + std::to_string(wanted) + " steps required",
                           0.0);
  const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(wanted));
  const double dt = duration / static_cast<double>(steps);

  const std::size_t size = p0.size();
  std::vector<double> p(p0.probs().begin(), p0.probs().end());
  std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
  for (std::size_t step = 0; step < steps; ++step) {
    gen.apply(p, k1);
    for (std::size_t n = 0; n < size; ++n) tmp[n] = p[n] + 0.5 * dt * k1[n];
    gen.apply(tmp, k2);
    for (std::size_t n = 0; n < size; ++n) tmp[n] = p[n] + 0.5 * dt * k2[n];
    gen.apply(tmp, k3);
    for (std::size_t n = 0; n < size; ++n) tmp[n] = p[n] + dt * k3[n];
    gen.apply(tmp, k4);
    bool finite = true;
    for (std::size_t n = 0; n < size; ++n) {
      p[n] += dt / 6.0 * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
      finite = finite && std::isfinite(p[n]);
    }
    if (!finite)
      throw IntegrationError("non-finite probability", dt * static_cast<double>(step + 1));
  }

  PhotonDistribution out(std::move(p));
  if (!(out.tail_mass() < options.tail_tolerance))
    throw TruncationError("evolved distribution has tail mass " + std::to_string(out.tail_mass()) +
                          " at n_max=" + std::to_string(out.n_max()) + "; increase n_max");
  return out;
}

FieldStatistics statistics(const PhotonDistribution& p, double fano_epsilon) {
  double mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  double variance = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double d = static_cast<double>(n) - mean;
    variance += d * d * p[n];
  }
  FieldStatistics s{mean, variance, std::sqrt(variance), std::nullopt};
  if (mean >= fano_epsilon) s.fano = variance / mean;
  return s;
}

}  // namespace qbd
