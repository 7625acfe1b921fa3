#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "qbd/errors.hpp"
#include "qbd/trajectory.hpp"

using namespace qbd;
using constants::pi;

namespace {

const DerivedRates kRates = derive_rates(PhysicalParams{});

TrajectoryConfig qnd_config(double duration, std::uint64_t seed) {
  TrajectoryConfig c;
  c.duration = duration;
  c.seed = seed;
  return c;
}

FilterState belief(std::vector<double> p) {
  return {PhotonDistribution::normalize(std::move(p)), 0.0};
}

}  // namespace

TEST_CASE("hidden thermal jumps") {
  RandomStream rng(1);
  SUBCASE("from vacuum only upward jumps, mean wait 1/(gamma nbar)") {
    double total = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const auto step = step_hidden(0, kRates, rng);
      CHECK(step.kind == EventKind::thermal_up);
      total += step.waiting_time;
    }
    const double expected = 1.0 / (kRates.gamma * kRates.nbar);
    CHECK(expected == doctest::Approx(0.101).epsilon(0.01));
    CHECK(total / draws == doctest::Approx(expected).epsilon(0.015));
  }
  SUBCASE("one photon: both directions, mean dwell 1/40.3 s") {
    double total = 0.0;
    int ups = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const auto step = step_hidden(1, kRates, rng);
      total += step.waiting_time;
      ups += step.kind == EventKind::thermal_up;
    }
    const double rate = kRates.gamma * (kRates.nbar + 1) + 2 * kRates.gamma * kRates.nbar;
    CHECK(rate == doctest::Approx(40.3).epsilon(0.002));
    CHECK(total / draws == doctest::Approx(1.0 / rate).epsilon(0.015));
    CHECK(static_cast<double>(ups) / draws ==
          doctest::Approx(2 * kRates.gamma * kRates.nbar / rate).epsilon(0.02));
  }
  SUBCASE("empty bath never jumps out of vacuum") {
    const auto step = step_hidden(0, {10.0, 0.0}, rng);
    CHECK(std::isinf(step.waiting_time));
  }
}

TEST_CASE("atom outcome sampling") {
  RandomStream rng(3);
  for (int i = 0; i < 10000; ++i) {
    const auto vac = sample_atom_outcome(0, pi / 2, rng);
    CHECK(vac.outcome == Outcome::f);
    CHECK(vac.new_true_n == 0);
    const auto one = sample_atom_outcome(1, pi / 2, rng);
    CHECK(one.outcome == Outcome::g);
    CHECK(one.new_true_n == 1);
  }
  int absorbed = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto two = sample_atom_outcome(2, pi / 2, rng);
    if (two.outcome == Outcome::e) {
      ++absorbed;
      CHECK(two.new_true_n == 1);
    } else {
      CHECK(two.new_true_n == 2);
    }
  }
  CHECK(std::abs(static_cast<double>(absorbed) / draws - 0.23227702320860219) < 0.005);
}

TEST_CASE("filter prediction") {
  const auto bath = thermal_generator(kRates);
  const auto one = FilterState{PhotonDistribution::fock(1, kDefaultNMax), 0.0};
  CHECK(filter_predict(one, bath, 0.0).belief == one.belief);

  const auto relaxed = filter_predict({PhotonDistribution::fock(0, kDefaultNMax), 0.0}, bath, 60.0);
  std::vector<double> be(kDefaultNMax + 1);
  for (std::size_t n = 0; n < be.size(); ++n) be[n] = oracle::bose_einstein(kRates.nbar, n);
  CHECK(oracle::l1({relaxed.belief.probs().begin(), relaxed.belief.probs().end()}, be) < 1e-6);
  CHECK(relaxed.time == 60.0);

  // Reference values from a dense matrix exponential of the bath generator.
  const auto short_time = filter_predict(one, bath, 0.01);
  CHECK(short_time.belief[0] == doctest::Approx(0.163332941306151).epsilon(1e-9));
  CHECK(short_time.belief[1] == doctest::Approx(0.700746476784672).epsilon(1e-9));
  CHECK(short_time.belief[2] == doctest::Approx(0.118780636565508).epsilon(1e-9));
  // Pure decay 1 - exp(-gamma (nbar+1) dt) ignores the 1 -> 2 -> 1 channel and bounds p(0).
  const double leading = 1.0 - std::exp(-kRates.gamma * (kRates.nbar + 1) * 0.01);
  CHECK(leading == doctest::Approx(0.186).epsilon(0.002));
  CHECK(short_time.belief[0] < leading);
  CHECK(short_time.belief[0] > leading - 0.03);
}

TEST_CASE("filter correction") {
  const std::vector<double> half{0.5, 0.5, 0, 0, 0, 0};
  const auto f = filter_correct(belief(half), Outcome::f, pi / 2);
  CHECK(f.belief[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.belief[1] < 1e-30);
  const auto g = filter_correct(belief(half), Outcome::g, pi / 2);
  CHECK(g.belief[1] == 1.0);
  CHECK(g.belief[0] == 0.0);
  const auto e = filter_correct({PhotonDistribution::fock(2, 6), 0.0}, Outcome::e, pi / 4);
  CHECK(e.belief == PhotonDistribution::fock(1, 6));

  CHECK_THROWS_AS(filter_correct({PhotonDistribution::fock(0, 6), 0.0}, Outcome::g, pi / 2),
                  ImpossibleOutcomeError);
  CHECK_THROWS_AS(filter_correct({PhotonDistribution::fock(0, 6), 0.0}, Outcome::e, 1.0),
                  ImpossibleOutcomeError);
}

TEST_CASE("predicted outcomes sum to one") {
  const auto p = PhotonDistribution::thermal(0.92, 40);
  for (double phi : {0.0, 0.7, pi / 2, 2.5}) {
    const auto w = predicted_outcomes(p, phi);
    CHECK(w.w_f + w.w_g + w.w_e == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("trajectory config validation") {
  auto c = qnd_config(1.0, 1);
  c.duration = 0.0;
  CHECK_THROWS_AS(simulate(c), ParameterError);
  c = qnd_config(1.0, 1);
  c.initial_n = c.n_max;
  CHECK_THROWS_AS(simulate(c), ParameterError);
  c = qnd_config(1.0, 1);
  c.record_stride = 0;
  CHECK_THROWS_AS(simulate(c), ParameterError);
}

TEST_CASE("empty cavity without atoms stays empty") {
  auto c = qnd_config(5.0, 9);
  c.params.temperature = 0.0;
  c.params.atom_rate = 0.0;
  const auto record = simulate(c);
  CHECK(record.events.empty());
  REQUIRE(record.samples.size() == 2);
  for (const auto& s : record.samples) {
    CHECK(s.true_n == 0);
    CHECK(s.filter_mean == 0.0);
    CHECK_FALSE(s.last_outcome.has_value());
  }
  CHECK(record.samples.back().time == 5.0);
}

TEST_CASE("QND trajectory over 10 s") {
  const auto record = simulate(qnd_config(10.0, 42));
  const auto occupation = occupation_times(record);
  CHECK(std::accumulate(occupation.begin(), occupation.end(), 0.0) == doctest::Approx(10.0));
  CHECK((occupation[0] + occupation[1]) / 10.0 > 0.95);

  double last_time = 0.0;
  std::size_t atoms = 0, violations = 0, switches = 0;
  std::optional<Outcome> previous;
  for (const auto& ev : record.events) {
    CHECK(ev.time > last_time);
    last_time = ev.time;
    if (ev.kind == EventKind::thermal_down) CHECK(ev.true_n_before() > 0);
    if (ev.kind != EventKind::atom) continue;
    ++atoms;
    if (ev.atom_outcome == Outcome::e) CHECK(ev.true_n_before() > 0);
    if (ev.true_n_before() == 1 && (ev.atom_outcome != Outcome::g || ev.true_n_after != 1))
      ++violations;
    if (ev.true_n_before() == 0) CHECK(ev.atom_outcome == Outcome::f);
    if (previous && *previous != *ev.atom_outcome) ++switches;
    previous = ev.atom_outcome;
  }
  CHECK(violations == 0);
  CHECK(atoms == doctest::Approx(30000).epsilon(0.05));
  // Telegraph signal: long runs of identical outcomes.
  CHECK(switches > 20);
  CHECK(switches < atoms / 20);
}

TEST_CASE("simulation is deterministic and replayable") {
  auto c = qnd_config(2.0, 7);
  const auto a = simulate(c);
  const auto b = simulate(c);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].time == b.events[i].time);
    CHECK(a.events[i].kind == b.events[i].kind);
    CHECK(a.events[i].atom_outcome == b.events[i].atom_outcome);
  }
  CHECK(a.config_echo.rng_algorithm == kRngAlgorithm);

  // With stride 1, sample i+1 is taken right after event i.
  REQUIRE(a.samples.size() == a.events.size() + 2);
  std::size_t index = 0, checked = 0;
  replay_filter(a, [&](const Event& ev, const OutcomeWeights&, const FilterState& posterior) {
    while (&a.events[index] != &ev) ++index;
    const auto s = statistics(posterior.belief);
    CHECK(a.samples[index + 1].filter_mean == s.mean_n);
    CHECK(a.samples[index + 1].filter_std == s.std_dev);
    ++checked;
  });
  CHECK(checked > 1000);
}

TEST_CASE("record stride decimates samples") {
  auto c = qnd_config(1.0, 5);
  c.record_stride = 100;
  const auto r = simulate(c);
  CHECK(r.samples.size() == r.events.size() / 100 + 2);
  CHECK(r.samples.front().time == 0.0);
  CHECK(r.samples.back().time == 1.0);
}

TEST_CASE("arrival model does not perturb the outcome stream") {
  // A nearly lossless cavity has no thermal jumps over 0.1 s, so the outcome
  // sequence depends only on the outcome substream.
  auto c = qnd_config(0.1, 123);
  c.params.q_factor = 1e16;
  c.params.phase = 0.9;
  c.initial_n = 3;
  auto regular = c;
  regular.arrival_model = ArrivalModel::regular;
  const auto a = simulate(c);
  const auto b = simulate(regular);
  std::vector<Outcome> oa, ob;
  for (const auto& ev : a.events)
    if (ev.atom_outcome) oa.push_back(*ev.atom_outcome);
  for (const auto& ev : b.events)
    if (ev.atom_outcome) ob.push_back(*ev.atom_outcome);
  const std::size_t common = std::min(oa.size(), ob.size());
  REQUIRE(common > 250);
  for (std::size_t i = 0; i < common; ++i) CHECK(oa[i] == ob[i]);
  // Regular arrivals land exactly on k / r.
  std::size_t k = 0;
  for (const auto& ev : b.events)
    if (ev.kind == EventKind::atom) CHECK(ev.time == static_cast<double>(++k) / 3000.0);
}

TEST_CASE("true photon number reaching n_max is a hard error") {
  auto c = qnd_config(50.0, 1);
  c.params.temperature = 30.0;
  c.params.atom_rate = 0.0;
  c.n_max = 4;
  CHECK_THROWS_AS(simulate(c), TruncationError);
}

TEST_CASE("occupation and dwell bookkeeping") {
  TrajectoryRecord r;
  r.config_echo.duration = 10.0;
  r.config_echo.n_max = 5;
  r.events = {{1.0, EventKind::thermal_up, 1, std::nullopt},
              {1.5, EventKind::atom, 1, Outcome::g},
              {3.0, EventKind::thermal_down, 0, std::nullopt},
              {7.0, EventKind::thermal_up, 1, std::nullopt},
              {7.5, EventKind::atom, 0, Outcome::e}};
  const auto occ = occupation_times(r);
  CHECK(occ[0] == doctest::Approx(1.0 + 4.0 + 2.5));
  CHECK(occ[1] == doctest::Approx(2.0 + 0.5));
  const auto zero = dwell_times(r, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0] == doctest::Approx(4.0));
  const auto one = dwell_times(r, 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0] == doctest::Approx(2.0));
  CHECK(one[1] == doctest::Approx(0.5));
}
