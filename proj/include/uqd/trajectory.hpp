#pragma once

// Quantum-jump trajectories of the counting unravelling.
//
// Between jumps the unnormalised state follows phi(t) = exp(-i H_eff t) psi_j.
// A jump fires when ||phi(t)||^2 falls to a uniform draw u; the channel is
// picked with probability proportional to ||J_k phi(t*)||^2.

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "uqd/sjed.hpp"

namespace uqd {

struct JumpEvent {
  double time = 0.0;
  /// 0-based jump index.
  std::size_t channel = 0;
};

struct LabelledTrajectory {
  PureState initial_state;
  std::vector<JumpEvent> events;
  std::vector<PureState> post_jump_states;
  double t_final = 0.0;
  std::uint64_t seed = 0;
  /// States at requested sample times (normalised), in the order requested.
  std::vector<double> sample_times;
  std::vector<PureState> samples;
  /// Largest |‖phi(t*)‖^2 - u| over accepted jumps.
  double max_root_residual = 0.0;

  /// q_{k,t}: jumps of each channel with time <= t.
  std::vector<std::size_t> counts(std::size_t channels, double t) const;
};

struct BlockEvent {
  double time = 0.0;
  /// 0-based SJED index.
  std::size_t block = 0;
};

struct PartiallyLabelledTrajectory {
  PureState initial_state;
  std::vector<BlockEvent> events;
  std::vector<PureState> post_jump_states;
  double t_final = 0.0;
  std::uint64_t seed = 0;

  /// Q_{alpha,t}
  std::vector<std::size_t> counts(std::size_t blocks, double t) const;
};

struct SimulationOptions {
  std::vector<double> sample_times;
};

/// Precomputed propagators for one representation. Thread-safe after construction.
class Simulator {
 public:
  explicit Simulator(const Representation& rep, const Tolerance& tol = {});

  LabelledTrajectory run(const PureState& psi0, double t_max, std::uint64_t seed,
                         const SimulationOptions& opts = {}) const;

  const Representation& representation() const { return rep_; }
  double step() const { return dt_; }

 private:
  Representation rep_;
  CMatrix heff_;
  CMatrix minus_i_heff_;
  double dt_ = 0.0;
  /// exp(-i H_eff dt / 2^k), k = 0..kLevels-1
  std::vector<CMatrix> halvings_;
};

LabelledTrajectory simulate(const Representation& rep, const PureState& psi0, double t_max,
                            std::uint64_t seed, const SimulationOptions& opts = {});

/// Independent stream seed for trajectory `index` of an ensemble.
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// Worker count from UQD_THREADS, else `requested`, else hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

std::vector<LabelledTrajectory> simulate_ensemble(const Representation& rep,
                                                  const PureState& psi0, double t_max,
                                                  std::size_t n, std::uint64_t master_seed,
                                                  const SimulationOptions& opts = {},
                                                  unsigned threads = 0);

PartiallyLabelledTrajectory coarse_grain(const LabelledTrajectory& traj,
                                         const SjedPartition& part);

/// Right-continuous conditional state at time t.
PureState state_at(const LabelledTrajectory& traj, const Representation& rep, double t);

/// State immediately before event i.
PureState pre_jump_state(const LabelledTrajectory& traj, const Representation& rep,
                         std::size_t i);

/// Largest trace distance between recorded and replayed post-jump states.
double replay_deviation(const LabelledTrajectory& traj, const Representation& rep);

nlohmann::json to_json(const LabelledTrajectory& traj);

}  // namespace uqd
