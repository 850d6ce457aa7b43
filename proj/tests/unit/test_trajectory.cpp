#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "uqd/models.hpp"
#include "uqd/trajectory.hpp"

using namespace uqd;

namespace {

bool same_events(const LabelledTrajectory& a, const LabelledTrajectory& b) {
  if (a.events.size() != b.events.size()) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    if (a.events[i].time != b.events[i].time || a.events[i].channel != b.events[i].channel) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("single decay waits an exponential time") {
  const double gamma = 1.3;
  const auto rep = models::single_decay(gamma);
  const std::size_t n = 10000;
  const auto ens = simulate_ensemble(rep, PureState::basis(2, 1), 40.0, n, 12345);
  std::vector<double> times;
  for (const auto& traj : ens) {
    REQUIRE(traj.events.size() == 1);
    CHECK(traj.events[0].channel == 0);
    times.push_back(traj.events[0].time);
  }
  std::sort(times.begin(), times.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = 1.0 - std::exp(-gamma * times[i]);
    d = std::max({d, std::abs(cdf - static_cast<double>(i) / n),
                  std::abs(static_cast<double>(i + 1) / n - cdf)});
  }
  CHECK(d < oracle::ks_critical(0.01, n));
}

TEST_CASE("dark states never jump") {
  const auto rep = models::single_decay();
  const auto traj = simulate(rep, PureState::basis(2, 0), 100.0, 3);
  CHECK(traj.events.empty());
  CHECK(traj.t_final == 100.0);
}

TEST_CASE("first-jump channels follow the replayed rates") {
  const auto rep = models::qutrit_full();
  const std::size_t n = 4000;
  const auto ens = simulate_ensemble(rep, PureState::basis(3, 1), 20.0, n, 777);
  std::vector<double> expected(rep.jump_count(), 0.0);
  std::vector<double> observed(rep.jump_count(), 0.0);
  for (const auto& traj : ens) {
    REQUIRE_FALSE(traj.events.empty());
    const CVector pre = pre_jump_state(traj, rep, 0).amplitudes();
    double total = 0.0;
    std::vector<double> r(rep.jump_count());
    for (std::size_t k = 0; k < rep.jump_count(); ++k) {
      r[k] = (rep.jumps[k] * pre).squaredNorm();
      total += r[k];
    }
    for (std::size_t k = 0; k < rep.jump_count(); ++k) expected[k] += r[k] / total;
    observed[traj.events[0].channel] += 1.0;
  }
  double chi2 = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < rep.jump_count(); ++k) {
    if (expected[k] < 5.0) {
      CHECK(observed[k] <= 5.0);
      continue;
    }
    chi2 += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
    ++cells;
  }
  REQUIRE(cells >= 3);
  // Upper 0.1% points of chi-square with cells - 1 degrees of freedom.
  const double critical[] = {0.0, 10.83, 13.82, 16.27, 18.47};
  CHECK(chi2 < critical[cells - 1]);
}

TEST_CASE("coarse graining") {
  const auto part = partition(models::qutrit_full());
  LabelledTrajectory traj{PureState::basis(3, 1), {}, {}, 1.0, 0, {}, {}, 0.0};
  traj.events = {{0.1, 0}, {0.2, 3}, {0.3, 2}};
  traj.post_jump_states.assign(3, PureState::basis(3, 0));
  const auto coarse = coarse_grain(traj, part);
  REQUIRE(coarse.events.size() == 3);
  CHECK(coarse.events[0].block == 0);
  CHECK(coarse.events[1].block == 1);
  CHECK(coarse.events[2].block == 0);
  CHECK(coarse.events[1].time == 0.2);

  const auto q = traj.counts(5, 0.25);
  CHECK(q == std::vector<std::size_t>{1, 0, 0, 1, 0});
  CHECK(coarse.counts(2, 1.0) == std::vector<std::size_t>{2, 1});

  LabelledTrajectory empty = traj;
  empty.events.clear();
  empty.post_jump_states.clear();
  CHECK(coarse_grain(empty, part).events.empty());

  const auto singletons = partition(models::single_decay());
  LabelledTrajectory one{PureState::basis(2, 1), {{0.5, 0}}, {PureState::basis(2, 0)}, 1.0, 0, {}, {}, 0.0};
  CHECK(coarse_grain(one, singletons).events[0].block == 0);

  traj.events[1].channel = 7;
  CHECK_THROWS_AS(coarse_grain(traj, part), std::out_of_range);
}

TEST_CASE("conditional states") {
  const auto rep = models::single_decay(0.8);
  const auto traj = simulate(rep, PureState::basis(2, 1), 30.0, 99);
  REQUIRE(traj.events.size() == 1);
  const double tj = traj.events[0].time;
  CHECK(state_at(traj, rep, 0.0).amplitudes() == traj.initial_state.amplitudes());
  const PureState before = state_at(traj, rep, 0.5 * tj);
  CHECK(std::abs(std::abs(before.amplitudes()(1)) - 1.0) < 1e-14);
  CHECK(std::abs(before.amplitudes()(0)) == 0.0);
  CHECK(state_at(traj, rep, tj).amplitudes() == traj.post_jump_states[0].amplitudes());
  CHECK_THROWS_AS(state_at(traj, rep, 31.0), std::out_of_range);
  CHECK_THROWS_AS(state_at(traj, rep, -1.0), std::out_of_range);

  models::QutritParams p;
  p.omega = 0.6;
  const auto driven = models::qutrit_full(p);
  SimulationOptions opts;
  opts.sample_times = {0.0, 0.7, 1.9, 3.0};
  const auto t2 = simulate(driven, PureState::basis(3, 1), 3.0, 5, opts);
  REQUIRE(t2.samples.size() == 4);
  for (std::size_t i = 0; i < opts.sample_times.size(); ++i) {
    // The replay path does not use the recorded samples.
    LabelledTrajectory bare = t2;
    bare.sample_times.clear();
    bare.samples.clear();
    const PureState replayed = state_at(bare, driven, opts.sample_times[i]);
    CHECK(pure_trace_distance(replayed.density(), t2.samples[i].density()) < 1e-8);
  }
  SimulationOptions bad;
  bad.sample_times = {1.0, 0.5};
  CHECK_THROWS_AS(simulate(driven, PureState::basis(3, 1), 3.0, 5, bad), std::invalid_argument);
}

TEST_CASE("replay and root accuracy") {
  models::QutritParams p;
  p.omega = 0.9;
  const auto rep = models::qutrit_full(p);
  const auto ens = simulate_ensemble(rep, PureState::basis(3, 1), 5.0, 200, 31);
  std::size_t jumps = 0;
  for (const auto& traj : ens) {
    jumps += traj.events.size();
    CHECK(replay_deviation(traj, rep) <= 1e-8);
    CHECK(traj.max_root_residual <= 1e-9);
    for (std::size_t i = 1; i < traj.events.size(); ++i) {
      CHECK(traj.events[i].time > traj.events[i - 1].time);
    }
  }
  CHECK(jumps > 200);
}

TEST_CASE("determinism") {
  const auto rep = models::qutrit_full();
  const auto psi0 = PureState::basis(3, 1);
  const auto a = simulate(rep, psi0, 10.0, 2024);
  const auto b = simulate(rep, psi0, 10.0, 2024);
  CHECK(same_events(a, b));
  CHECK_FALSE(same_events(a, simulate(rep, psi0, 10.0, 2025)));

  const auto serial = simulate_ensemble(rep, psi0, 5.0, 64, 8, {}, 1);
  const auto parallel = simulate_ensemble(rep, psi0, 5.0, 64, 8, {}, 4);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(same_events(serial[i], parallel[i]));
    CHECK(serial[i].seed == trajectory_seed(8, i));
  }
  CHECK(trajectory_seed(8, 0) != trajectory_seed(8, 1));
  CHECK(trajectory_seed(8, 1) != trajectory_seed(9, 0));
}

TEST_CASE("norm decays between jumps") {
  models::QutritParams p;
  p.omega = 1.2;
  const CMatrix g = Complex(0, -1) * effective_hamiltonian(models::qutrit_full(p));
  CVector phi = random_pure_state(3, 17).amplitudes();
  const CMatrix step = oracle::taylor_exp(0.01 * g);
  double last = phi.squaredNorm();
  for (int i = 0; i < 1000; ++i) {
    phi = step * phi;
    CHECK(phi.squaredNorm() <= last + 1e-15);
    last = phi.squaredNorm();
  }
}

TEST_CASE("invalid inputs") {
  Representation growing = models::single_decay();
  growing.hamiltonian(1, 1) = Complex(0, 2.0);
  CHECK_THROWS_WITH_AS(Simulator{growing}, "invalid effective Hamiltonian", NumericError);
  const auto rep = models::single_decay();
  CHECK_THROWS_AS(simulate(rep, PureState::basis(2, 1), 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate(rep, PureState::basis(3, 1), 1.0, 1), std::invalid_argument);
}

TEST_CASE("trajectory json") {
  LabelledTrajectory traj{PureState::basis(2, 1), {{0.5, 0}}, {PureState::basis(2, 0)}, 1.0, 42, {}, {}, 0.0};
  const auto j = to_json(traj);
  CHECK(j["events"][0]["channel"] == 1);
  CHECK(j["seed"] == 42);
  CHECK(j["post_jump_states"].size() == 1);
}
