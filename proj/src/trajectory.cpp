#include "uqd/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

#include "uqd/json_io.hpp"

namespace uqd {

namespace {

constexpr int kLevels = 64;
/// Bisection stops once the bracket is below this fraction of the step.
constexpr double kTimeResolution = 1e-10;
constexpr double kRateFloor = 1e-14;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform on the open interval (0, 1).
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

CVector propagate(const CMatrix& minus_i_heff, double h, const CVector& phi) {
  return matrix_exponential(minus_i_heff * h) * phi;
}

std::size_t last_event_at_or_before(const std::vector<JumpEvent>& events, double t) {
  // Number of events with time <= t.
  return static_cast<std::size_t>(
      std::upper_bound(events.begin(), events.end(), t,
                       [](double v, const JumpEvent& e) { return v < e.time; }) -
      events.begin());
}

bool shapes_consistent(const Representation& rep) {
  const Eigen::Index d = rep.hamiltonian.rows();
  if (d == 0 || rep.hamiltonian.cols() != d || rep.jumps.empty()) {
    return false;
  }
  return std::all_of(rep.jumps.begin(), rep.jumps.end(),
                     [d](const CMatrix& j) { return j.rows() == d && j.cols() == d; });
}

CMatrix jump_weight(const Representation& rep) {
  CMatrix w = CMatrix::Zero(rep.hamiltonian.rows(), rep.hamiltonian.cols());
  for (const CMatrix& j : rep.jumps) {
    w += j.adjoint() * j;
  }
  return w;
}

}  // namespace

std::vector<std::size_t> LabelledTrajectory::counts(std::size_t channels, double t) const {
  std::vector<std::size_t> q(channels, 0);
  for (const JumpEvent& e : events) {
    if (e.time > t) {
      break;
    }
    if (e.channel >= channels) {
      throw std::out_of_range("event channel outside the channel range");
    }
    ++q[e.channel];
  }
  return q;
}

std::vector<std::size_t> PartiallyLabelledTrajectory::counts(std::size_t blocks, double t) const {
  std::vector<std::size_t> q(blocks, 0);
  for (const BlockEvent& e : events) {
    if (e.time > t) {
      break;
    }
    if (e.block >= blocks) {
      throw std::out_of_range("event block outside the block range");
    }
    ++q[e.block];
  }
  return q;
}

Simulator::Simulator(const Representation& rep, const Tolerance& tol) : rep_(rep) {
  // Norm growth is reported ahead of the generic Hermiticity violation.
  if (shapes_consistent(rep_)) {
    const CMatrix heff = rep_.hamiltonian - Complex(0, 0.5) * jump_weight(rep_);
    const CMatrix anti = (heff - heff.adjoint()) / Complex(0, 2);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(anti, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().maxCoeff() > tol.bound(anti.norm())) {
      throw NumericError("invalid effective Hamiltonian");
    }
  }
  require_valid(rep_, tol);
  heff_ = effective_hamiltonian(rep_);
  minus_i_heff_ = Complex(0, -1) * heff_;
  dt_ = 0.01 / heff_.norm();
  halvings_.reserve(kLevels);
  double h = dt_;
  for (int k = 0; k < kLevels; ++k, h *= 0.5) {
    halvings_.push_back(matrix_exponential(minus_i_heff_ * h));
  }
}

LabelledTrajectory Simulator::run(const PureState& psi0, double t_max, std::uint64_t seed,
                                  const SimulationOptions& opts) const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw std::invalid_argument("t_max must be positive and finite");
  }
  if (psi0.dim() != rep_.dim()) {
    throw std::invalid_argument("initial state dimension " + std::to_string(psi0.dim()) +
                                " does not match representation dimension " +
                                std::to_string(rep_.dim()));
  }
  const auto& sample_times = opts.sample_times;
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0.0 || sample_times[i] > t_max ||
        (i > 0 && sample_times[i] < sample_times[i - 1])) {
      throw std::invalid_argument("sample times must be ascending within [0, t_max]");
    }
  }

  LabelledTrajectory traj{psi0, {}, {}, t_max, seed, sample_times, {}, 0.0};
  traj.samples.reserve(sample_times.size());
  std::mt19937_64 rng(seed);
  const std::size_t n_jumps = rep_.jump_count();
  const Eigen::Index dim = rep_.dim();

  CVector phi = psi0.amplitudes();
  CVector next(dim);
  CVector mid(dim);
  CVector jumped(dim);
  std::vector<double> rates(n_jumps);
  std::size_t next_sample = 0;
  double t = 0.0;
  double u = open_uniform(rng);

  // Samples strictly before t_end are taken from phi at time t.
  auto record_before = [&](double t_end) {
    while (next_sample < sample_times.size() && sample_times[next_sample] < t_end) {
      const double s = sample_times[next_sample];
      traj.samples.emplace_back(s == t ? phi : propagate(minus_i_heff_, s - t, phi));
      ++next_sample;
    }
  };

  while (t < t_max) {
    const double h = std::min(dt_, t_max - t);
    if (h == dt_) {
      next.noalias() = halvings_[0] * phi;
    } else {
      next = propagate(minus_i_heff_, h, phi);
    }
    if (next.squaredNorm() > u) {
      record_before(t + h);
      phi.swap(next);
      t = (h == dt_) ? t + h : t_max;
      continue;
    }

    // The root lies in (t, t + h] within the cached grid [t, t + dt].
    double t_left = t;
    CVector& left = next;
    left = phi;
    double width = dt_;
    for (int k = 1; k < kLevels && width > kTimeResolution * dt_; ++k) {
      width *= 0.5;
      mid.noalias() = halvings_[k] * left;
      if (mid.squaredNorm() > u) {
        left.swap(mid);
        t_left += width;
      }
    }
    traj.max_root_residual = std::max(traj.max_root_residual, std::abs(left.squaredNorm() - u));
    record_before(t_left);

    const double norm = left.norm();
    double total = 0.0;
    for (std::size_t k = 0; k < n_jumps; ++k) {
      jumped.noalias() = rep_.jumps[k] * left;
      const double r = jumped.squaredNorm() / (norm * norm);
      rates[k] = r < kRateFloor ? 0.0 : r;
      total += rates[k];
    }
    if (!(total > 0.0)) {
      throw NumericError("jump triggered with vanishing total rate at t = " +
                         std::to_string(t_left));
    }
    const double pick = open_uniform(rng) * total;
    std::size_t channel = 0;
    double acc = rates[0];
    while (acc < pick && channel + 1 < n_jumps) {
      acc += rates[++channel];
    }
    while (rates[channel] == 0.0) {
      // Guard against landing on an excluded channel through rounding.
      channel = channel == 0 ? n_jumps - 1 : channel - 1;
    }
    jumped.noalias() = rep_.jumps[channel] * left;
    phi = jumped / jumped.norm();
    t = t_left;
    traj.events.push_back({t, channel});
    traj.post_jump_states.emplace_back(phi);
    u = open_uniform(rng);
  }
  record_before(std::numeric_limits<double>::infinity());
  return traj;
}

LabelledTrajectory simulate(const Representation& rep, const PureState& psi0, double t_max,
                            std::uint64_t seed, const SimulationOptions& opts) {
  return Simulator(rep).run(psi0, t_max, seed, opts);
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) + index);
}

unsigned resolve_threads(unsigned requested) {
  if (const char* env = std::getenv("UQD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) {
      return static_cast<unsigned>(v);
    }
    throw std::invalid_argument("UQD_THREADS must be a positive integer");
  }
  if (requested > 0) {
    return requested;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<LabelledTrajectory> simulate_ensemble(const Representation& rep,
                                                  const PureState& psi0, double t_max,
                                                  std::size_t n, std::uint64_t master_seed,
                                                  const SimulationOptions& opts,
                                                  unsigned threads) {
  const Simulator sim(rep);
  std::vector<std::optional<LabelledTrajectory>> slots(n);
  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = cursor++; i < n; i = cursor++) {
        slots[i] = sim.run(psi0, t_max, trajectory_seed(master_seed, i), opts);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
      cursor = n;
    }
  };
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  std::vector<LabelledTrajectory> out;
  out.reserve(n);
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

PartiallyLabelledTrajectory coarse_grain(const LabelledTrajectory& traj,
                                         const SjedPartition& part) {
  PartiallyLabelledTrajectory out{traj.initial_state, {}, traj.post_jump_states, traj.t_final,
                                  traj.seed};
  out.events.reserve(traj.events.size());
  for (const JumpEvent& e : traj.events) {
    if (e.channel >= part.block_of.size()) {
      throw std::out_of_range("channel " + std::to_string(e.channel + 1) +
                              " not covered by the partition");
    }
    out.events.push_back({e.time, part.block_of[e.channel]});
  }
  return out;
}

PureState state_at(const LabelledTrajectory& traj, const Representation& rep, double t) {
  if (!(t >= 0.0) || t > traj.t_final) {
    throw std::out_of_range("time outside [0, t_final]");
  }
  for (std::size_t i = 0; i < traj.sample_times.size() && i < traj.samples.size(); ++i) {
    if (traj.sample_times[i] == t) {
      return traj.samples[i];
    }
  }
  const std::size_t n = last_event_at_or_before(traj.events, t);
  const PureState& from = n == 0 ? traj.initial_state : traj.post_jump_states[n - 1];
  const double t0 = n == 0 ? 0.0 : traj.events[n - 1].time;
  if (t == t0) {
    return from;
  }
  const CMatrix minus_i_heff = Complex(0, -1) * effective_hamiltonian(rep);
  return PureState(propagate(minus_i_heff, t - t0, from.amplitudes()));
}

PureState pre_jump_state(const LabelledTrajectory& traj, const Representation& rep,
                         std::size_t i) {
  if (i >= traj.events.size()) {
    throw std::out_of_range("event index out of range");
  }
  const PureState& from = i == 0 ? traj.initial_state : traj.post_jump_states[i - 1];
  const double t0 = i == 0 ? 0.0 : traj.events[i - 1].time;
  const CMatrix minus_i_heff = Complex(0, -1) * effective_hamiltonian(rep);
  return PureState(propagate(minus_i_heff, traj.events[i].time - t0, from.amplitudes()));
}

double replay_deviation(const LabelledTrajectory& traj, const Representation& rep) {
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.events.size(); ++i) {
    const PureState pre = pre_jump_state(traj, rep, i);
    const PureState post(rep.jumps.at(traj.events[i].channel) * pre.amplitudes());
    worst = std::max(worst, pure_trace_distance(post.density(), traj.post_jump_states[i].density()));
  }
  return worst;
}

nlohmann::json to_json(const LabelledTrajectory& traj) {
  nlohmann::json j;
  j["seed"] = traj.seed;
  j["t_final"] = traj.t_final;
  j["initial_state"] = json_io::encode(traj.initial_state);
  j["events"] = nlohmann::json::array();
  for (const JumpEvent& e : traj.events) {
    j["events"].push_back({{"time", e.time}, {"channel", e.channel + 1}});
  }
  j["post_jump_states"] = nlohmann::json::array();
  for (const PureState& s : traj.post_jump_states) {
    j["post_jump_states"].push_back(json_io::encode(s));
  }
  if (!traj.samples.empty()) {
    j["samples"] = nlohmann::json::array();
    for (std::size_t i = 0; i < traj.samples.size(); ++i) {
      j["samples"].push_back(
          {{"time", traj.sample_times[i]}, {"state", json_io::encode(traj.samples[i])}});
    }
  }
  return j;
}

}  // namespace uqd
