#include "qbd/trajectory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qbd/errors.hpp"

namespace qbd {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kImpossibleWeight = 1e-300;

struct Moments {
  double mean;
  double std_dev;
};

Moments moments_of(const PhotonDistribution& p) {
  const auto s = statistics(p);
  return {s.mean_n, s.std_dev};
}

class ArrivalClock {
 public:
  ArrivalClock(const TrajectoryConfig& config)
      : model_(config.arrival_model),
        rate_(config.params.atom_rate),
        rng_(config.seed, Substream::arrivals) {}

  double next(double now) {
    if (!(rate_ > 0.0)) return kInfinity;
    if (model_ == ArrivalModel::regular) return static_cast<double>(++count_) / rate_;
    return now + rng_.exponential(rate_);
  }

 private:
  ArrivalModel model_;
  double rate_;
  RandomStream rng_;
  std::uint64_t count_ = 0;
};

}  // namespace

void validate(const TrajectoryConfig& c) {
  validate(c.params);
  if (c.n_max < 2) throw ParameterError("n_max must be >= 2");
  if (!(c.duration > 0.0) || !std::isfinite(c.duration))
    throw ParameterError("duration must be finite and > 0");
  if (c.initial_n >= c.n_max) throw ParameterError("initial_n must be below n_max");
  if (c.record_stride < 1) throw ParameterError("record_stride must be >= 1");
}

HiddenStep step_hidden(std::size_t true_n, const DerivedRates& rates, RandomStream& rng) {
  const double n = static_cast<double>(true_n);
  const double up = rates.gamma * rates.nbar * (n + 1.0);
  const double down = rates.gamma * (rates.nbar + 1.0) * n;
  const double total = up + down;
  if (!(total > 0.0)) return {kInfinity, EventKind::thermal_up};
  const double wait = rng.exponential(total);
  const EventKind kind =
      rng.uniform() * total < up ? EventKind::thermal_up : EventKind::thermal_down;
  return {wait, kind};
}

AtomDraw sample_atom_outcome(std::size_t true_n, double phase, RandomStream& rng) {
  const OutcomeWeights w = passage_weights(true_n, phase);
  const double u = rng.uniform();
  // e first, so a level with w_e == 0 can never lose a photon.
  if (u < w.w_e) return {Outcome::e, true_n - 1};
  if (u < w.w_e + w.w_g) return {Outcome::g, true_n};
  return {Outcome::f, true_n};
}

FilterState filter_predict(const FilterState& state, const BirthDeathGenerator& gen_thermal,
                           double dt) {
  if (!(dt >= 0.0)) throw ContractError("filter_predict needs dt >= 0");
  if (dt == 0.0) return state;
  return {evolve(state.belief, gen_thermal, dt), state.time + dt};
}

PassageTable::PassageTable(double phase, std::size_t n_max) {
  weights_.reserve(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) weights_.push_back(passage_weights(n, phase));
}

FilterState filter_correct(const FilterState& state, Outcome outcome, double phase) {
  return filter_correct(state, outcome, PassageTable(phase, state.belief.n_max()));
}

FilterState filter_correct(const FilterState& state, Outcome outcome, const PassageTable& table) {
  const auto& prior = state.belief;
  const std::size_t last = prior.n_max();
  if (table.n_max() != last) throw ContractError("passage table and belief truncation differ");
  std::vector<double> post(last + 1, 0.0);
  double total = 0.0;
  for (std::size_t n = 0; n <= last; ++n) {
    double v = 0.0;
    if (outcome == Outcome::e) {
      if (n < last) v = table[n + 1].w_e * prior[n + 1];
    } else {
      v = weight_of(table[n], outcome) * prior[n];
    }
    post[n] = v;
    total += v;
  }
  if (!(total >= kImpossibleWeight))
    throw ImpossibleOutcomeError(std::string("outcome ") + outcome_letter(outcome) +
                                 " has zero probability under the filter at t=" +
                                 std::to_string(state.time) + " s");
  return {PhotonDistribution::normalize(std::move(post)), state.time};
}

OutcomeWeights predicted_outcomes(const PhotonDistribution& belief, double phase) {
  return predicted_outcomes(belief, PassageTable(phase, belief.n_max()));
}

OutcomeWeights predicted_outcomes(const PhotonDistribution& belief, const PassageTable& table) {
  OutcomeWeights out{0.0, 0.0, 0.0};
  for (std::size_t n = 0; n < belief.size(); ++n) {
    const auto& w = table[n];
    out.w_f += w.w_f * belief[n];
    out.w_g += w.w_g * belief[n];
    out.w_e += w.w_e * belief[n];
  }
  return out;
}

FilterState initial_filter_state(const TrajectoryConfig& config) {
  const DerivedRates rates = derive_rates(config.params);
  return {PhotonDistribution::thermal(rates.nbar, config.n_max), 0.0};
}

TrajectoryRecord simulate(const TrajectoryConfig& config) {
  validate(config);
  const DerivedRates rates = derive_rates(config.params);
  const BirthDeathGenerator bath = thermal_generator(rates, config.n_max);
  const double phase = config.params.phase;
  const PassageTable table(phase, config.n_max);

  RandomStream thermal_rng(config.seed, Substream::thermal);
  RandomStream outcome_rng(config.seed, Substream::outcomes);
  ArrivalClock arrivals(config);

  TrajectoryRecord record;
  record.config_echo = config;
  record.config_echo.rng_algorithm = std::string(kRngAlgorithm);

  FilterState filter = initial_filter_state(config);
  Moments filter_moments = moments_of(filter.belief);
  std::optional<Outcome> last_outcome;
  std::size_t n = config.initial_n;

  record.samples.push_back({0.0, n, filter_moments.mean, filter_moments.std_dev, last_outcome});

  HiddenStep pending = step_hidden(n, rates, thermal_rng);
  double next_thermal = pending.waiting_time;
  double next_atom = arrivals.next(0.0);
  std::size_t event_count = 0;

  while (true) {
    const double t = std::min(next_thermal, next_atom);
    if (!(t <= config.duration)) break;

    if (next_thermal <= next_atom) {
      n = pending.kind == EventKind::thermal_up ? n + 1 : n - 1;
      if (n >= config.n_max)
        throw TruncationError("true photon number reached n_max=" + std::to_string(config.n_max) +
                              " at t=" + std::to_string(t) + " s; increase n_max");
      record.events.push_back({t, pending.kind, n, std::nullopt});
      pending = step_hidden(n, rates, thermal_rng);
      next_thermal = t + pending.waiting_time;
    } else {
      const AtomDraw draw = sample_atom_outcome(n, phase, outcome_rng);
      if (draw.new_true_n != n) {
        n = draw.new_true_n;
        // Memoryless: the pending bath jump is redrawn for the new level.
        pending = step_hidden(n, rates, thermal_rng);
        next_thermal = t + pending.waiting_time;
      }
      filter = filter_correct(filter_predict(filter, bath, t - filter.time), draw.outcome, table);
      filter_moments = moments_of(filter.belief);
      last_outcome = draw.outcome;
      record.events.push_back({t, EventKind::atom, n, draw.outcome});
      next_atom = arrivals.next(t);
    }

    if (++event_count % config.record_stride == 0)
      record.samples.push_back({t, n, filter_moments.mean, filter_moments.std_dev, last_outcome});
  }

  record.samples.push_back(
      {config.duration, n, filter_moments.mean, filter_moments.std_dev, last_outcome});
  return record;
}

void replay_filter(const TrajectoryRecord& record, const ReplayVisitor& visit) {
  const auto& config = record.config_echo;
  const DerivedRates rates = derive_rates(config.params);
  const BirthDeathGenerator bath = thermal_generator(rates, config.n_max);
  const PassageTable table(config.params.phase, config.n_max);
  FilterState filter = initial_filter_state(config);
  for (const Event& ev : record.events) {
    if (ev.kind != EventKind::atom) continue;
    const FilterState prior = filter_predict(filter, bath, ev.time - filter.time);
    const OutcomeWeights predicted = predicted_outcomes(prior.belief, table);
    filter = filter_correct(prior, *ev.atom_outcome, table);
    visit(ev, predicted, filter);
  }
}

std::vector<double> occupation_times(const TrajectoryRecord& record) {
  const auto& config = record.config_echo;
  std::vector<double> time_at(config.n_max + 1, 0.0);
  std::size_t n = config.initial_n;
  double since = 0.0;
  for (const Event& ev : record.events) {
    if (ev.true_n_after == n) continue;
    time_at[n] += ev.time - since;
    since = ev.time;
    n = ev.true_n_after;
  }
  time_at[n] += config.duration - since;
  return time_at;
}

std::vector<double> dwell_times(const TrajectoryRecord& record, std::size_t level) {
  std::vector<double> dwell;
  std::size_t n = record.config_echo.initial_n;
  std::optional<double> entered;
  for (const Event& ev : record.events) {
    if (ev.true_n_after == n) continue;
    if (n == level && entered) dwell.push_back(ev.time - *entered);
    n = ev.true_n_after;
    entered = ev.time;
  }
  return dwell;
}

}  // namespace qbd
