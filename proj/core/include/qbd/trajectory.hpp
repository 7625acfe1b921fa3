#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qbd/master_equation.hpp"
#include "qbd/photon_distribution.hpp"
#include "qbd/physics.hpp"
#include "qbd/rng.hpp"

namespace qbd {

enum class ArrivalModel { poisson, regular };

struct TrajectoryConfig {
  PhysicalParams params;
  std::size_t n_max = kDefaultNMax;
  double duration = 10.0;  // s
  std::uint64_t seed = 42;
  ArrivalModel arrival_model = ArrivalModel::poisson;
  std::size_t initial_n = 0;
  std::size_t record_stride = 1;
  std::string rng_algorithm{kRngAlgorithm};

  friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

void validate(const TrajectoryConfig& config);

enum class EventKind { thermal_up, thermal_down, atom };

struct Event {
  double time;
  EventKind kind;
  std::size_t true_n_after;
  std::optional<Outcome> atom_outcome;  // set iff kind == atom

  std::size_t true_n_before() const {
    switch (kind) {
      case EventKind::thermal_up: return true_n_after - 1;
      case EventKind::thermal_down: return true_n_after + 1;
      case EventKind::atom: return true_n_after + (atom_outcome == Outcome::e ? 1 : 0);
    }
    return true_n_after;
  }
};

// Observer's posterior p(n | detection record) as of `time`.
struct FilterState {
  PhotonDistribution belief;
  double time;
};

struct Sample {
  double time;
  std::size_t true_n;
  double filter_mean;
  double filter_std;
  std::optional<Outcome> last_outcome;
};

// Hidden photon-number path plus what the observer inferred from it. Filter
// columns in `samples` hold the posterior after the most recent detection.
struct TrajectoryRecord {
  std::vector<Event> events;
  std::vector<Sample> samples;
  TrajectoryConfig config_echo;
};

struct HiddenStep {
  double waiting_time;  // infinite when the thermal generator row is empty
  EventKind kind;
};

// Next heat-bath jump out of true_n.
HiddenStep step_hidden(std::size_t true_n, const DerivedRates& rates, RandomStream& rng);

struct AtomDraw {
  Outcome outcome;
  std::size_t new_true_n;
};

AtomDraw sample_atom_outcome(std::size_t true_n, double phase, RandomStream& rng);

// Propagates the belief over dt under the heat bath alone; thermal jumps are
// not observed.
FilterState filter_predict(const FilterState& state, const BirthDeathGenerator& gen_thermal,
                           double dt);

// passage_weights(n, phase) for n = 0..n_max, evaluated once.
class PassageTable {
 public:
  PassageTable(double phase, std::size_t n_max);
  const OutcomeWeights& operator[](std::size_t n) const { return weights_[n]; }
  std::size_t n_max() const noexcept { return weights_.size() - 1; }

 private:
  std::vector<OutcomeWeights> weights_;
};

// Bayes update on a detected atom. Outcome e also removes the absorbed photon.
FilterState filter_correct(const FilterState& state, Outcome outcome, double phase);
FilterState filter_correct(const FilterState& state, Outcome outcome, const PassageTable& table);

// Probability of each outcome for the next atom under the current belief.
OutcomeWeights predicted_outcomes(const PhotonDistribution& belief, double phase);
OutcomeWeights predicted_outcomes(const PhotonDistribution& belief, const PassageTable& table);

// Observer prior at t = 0: the bath's Bose-Einstein distribution.
FilterState initial_filter_state(const TrajectoryConfig& config);

TrajectoryRecord simulate(const TrajectoryConfig& config);

// Re-runs the observer over the atom events of a record. The callback sees
// each atom event, the pre-detection outcome prediction and the posterior.
using ReplayVisitor =
    std::function<void(const Event&, const OutcomeWeights& predicted, const FilterState& posterior)>;
void replay_filter(const TrajectoryRecord& record, const ReplayVisitor& visit);

// Time spent at each photon number over [0, duration].
std::vector<double> occupation_times(const TrajectoryRecord& record);

// Lengths of completed visits to `level` (entered and left by an event
// inside the run).
std::vector<double> dwell_times(const TrajectoryRecord& record, std::size_t level);

}  // namespace qbd
