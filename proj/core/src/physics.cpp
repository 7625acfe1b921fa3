#include "qbd/physics.hpp"

#include <cmath>
#include <string>

#include "qbd/errors.hpp"

namespace qbd {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

void validate(const PhysicalParams& p) {
  require(std::isfinite(p.frequency) && p.frequency > 0, "frequency must be finite and > 0");
  require(std::isfinite(p.q_factor) && p.q_factor > 0, "q_factor must be finite and > 0");
  require(std::isfinite(p.temperature) && p.temperature >= 0,
          "temperature must be finite and >= 0");
  require(std::isfinite(p.atom_rate) && p.atom_rate >= 0, "atom_rate must be finite and >= 0");
  require(std::isfinite(p.phase) && p.phase >= 0, "phase must be finite and >= 0");
}

double thermal_occupation(double frequency, double temperature) {
  require(std::isfinite(frequency) && frequency > 0, "frequency must be finite and > 0");
  require(std::isfinite(temperature) && temperature >= 0, "temperature must be finite and >= 0");
  if (temperature == 0.0) return 0.0;
  const double x = constants::planck * frequency / (constants::boltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double cavity_decay_rate(double frequency, double q_factor) {
  require(std::isfinite(frequency) && frequency > 0, "frequency must be finite and > 0");
  require(std::isfinite(q_factor) && q_factor > 0, "q_factor must be finite and > 0");
  return frequency / q_factor;
}

double rabi_phase(const InteractionGeometry& g) {
  require(std::isfinite(g.rabi_frequency) && g.rabi_frequency > 0, "rabi_frequency must be > 0");
  require(std::isfinite(g.length) && g.length > 0, "interaction length must be > 0");
  require(std::isfinite(g.velocity) && g.velocity > 0, "atom velocity must be > 0");
  return g.rabi_frequency * g.length / g.velocity;
}

DerivedRates derive_rates(const PhysicalParams& params) {
  validate(params);
  return {cavity_decay_rate(params.frequency, params.q_factor),
          thermal_occupation(params.frequency, params.temperature)};
}

OutcomeWeights passage_weights(std::size_t n, double phase) {
  if (n == 0) return {1.0, 0.0, 0.0};
  const double x = phase * std::sqrt(static_cast<double>(n));
  const double c = std::cos(x);
  const double s = std::sin(x);
  const double s2 = s * s;
  // sin^2(2x) / 4 == sin^2 x cos^2 x; the product form keeps the three
  // weights summing to one up to a few ulps.
  return {c * c, s2 * s2, s2 * c * c};
}

char outcome_letter(Outcome o) {
  switch (o) {
    case Outcome::f: return 'F';
    case Outcome::g: return 'G';
    case Outcome::e: return 'E';
  }
  return '-';
}

}  // namespace qbd
