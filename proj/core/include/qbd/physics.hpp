#pragma once

#include <cstddef>

namespace qbd {

// Physical constants (CODATA 2018, exact SI values).
namespace constants {
inline constexpr double planck = 6.62607015e-34;     // J s
inline constexpr double boltzmann = 1.380649e-23;    // J / K
inline constexpr double pi = 3.141592653589793238462643383279502884;
}  // namespace constants

// Cavity, bath and atom-beam parameters. Frequencies are in Hz (cycles per
// second); angular frequencies never appear in the public interface.
struct PhysicalParams {
  double frequency = 21.456e9;  // cavity mode, Hz
  double q_factor = 2e9;
  double temperature = 1.4;     // K
  double atom_rate = 3000.0;    // atoms per second
  double phase = constants::pi / 2;  // Rabi phase, rad

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

// Atom-field interaction geometry, from which the Rabi phase follows.
struct InteractionGeometry {
  double rabi_frequency;  // effective Rabi frequency, rad/s
  double length;          // interaction length, m
  double velocity;        // atom velocity, m/s
};

struct DerivedRates {
  double gamma;  // cavity energy decay rate, 1/s
  double nbar;   // mean thermal photon number
};

// Detection probabilities of one ground-state atom after its passage.
struct OutcomeWeights {
  double w_f;  // auxiliary state: the first interaction left the atom in g
  double w_g;  // ground state: photon absorbed and given back
  double w_e;  // excited state: photon removed from the cavity
};

enum class Outcome { f, g, e };

// Throws ParameterError unless every field is finite and in its domain.
void validate(const PhysicalParams& params);

// Bose-Einstein occupation [exp(h f / k T) - 1]^-1; exactly 0 at T = 0.
double thermal_occupation(double frequency, double temperature);

// Energy decay rate omega / (2 pi Q) = f / Q.
double cavity_decay_rate(double frequency, double q_factor);

double rabi_phase(const InteractionGeometry& geometry);

DerivedRates derive_rates(const PhysicalParams& params);

// Outcome probabilities for an atom crossing a cavity holding n photons:
//   w_f = cos^2(phase sqrt n), w_g = sin^4(phase sqrt n),
//   w_e = sin^2(2 phase sqrt n) / 4.
OutcomeWeights passage_weights(std::size_t n, double phase);

inline double weight_of(const OutcomeWeights& w, Outcome o) {
  switch (o) {
    case Outcome::f: return w.w_f;
    case Outcome::g: return w.w_g;
    case Outcome::e: return w.w_e;
  }
  return 0.0;
}

char outcome_letter(Outcome o);

}  // namespace qbd
