#include "uqd/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "uqd/json_io.hpp"

namespace uqd {

namespace {

/// Trace distance between Hermitian matrices, 0.5 * ||a - b||_1.
double trace_distance(const CMatrix& a, const CMatrix& b) {
  const CMatrix diff = a - b;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (diff + diff.adjoint()),
                                             Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

CMatrix block_action(const Representation& rep, const SjedBlock& block, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rep.dim(), rep.dim());
  for (std::size_t k : block.indices) {
    out += rep.jumps[k] * rho * rep.jumps[k].adjoint();
  }
  return out;
}

double total_rate(const Representation& rep, const PureState& psi) {
  double sum = 0.0;
  for (std::size_t k = 0; k < rep.jump_count(); ++k) {
    sum += jump_rate(rep, k, psi);
  }
  return sum;
}

struct PairDeviation {
  double action = 0.0;
  double rate = 0.0;
  double destination = 0.0;
};

PairDeviation compare_actions(const CMatrix& x, const CMatrix& y, const Tolerance& tol) {
  PairDeviation dev;
  dev.action = (x - y).norm();
  const double tx = x.trace().real();
  const double ty = y.trace().real();
  dev.rate = std::abs(tx - ty);
  const bool live_x = tx > tol.atol();
  const bool live_y = ty > tol.atol();
  if (live_x && live_y) {
    dev.destination = trace_distance(x / tx, y / ty);
  } else if (live_x != live_y) {
    dev.destination = 1.0;
  }
  return dev;
}

void check_block_permutation(const std::vector<std::size_t>& perm, std::size_t size_b,
                             std::size_t size_a, const std::string& what) {
  if (perm.size() != size_b) {
    throw std::invalid_argument(what + " has length " + std::to_string(perm.size()) +
                                ", expected " + std::to_string(size_b));
  }
  std::vector<bool> seen(size_a, false);
  for (std::size_t p : perm) {
    if (p >= size_a || seen[p]) {
      throw std::invalid_argument(what + " is not a permutation");
    }
    seen[p] = true;
  }
}

/// Values are snapped to a 1e-9 grid so that states equal up to rounding
/// compare as ties in the rank statistics.
double expectation(const CMatrix& op, const PureState& psi) {
  constexpr double kResolution = 1e-9;
  const double v = psi.amplitudes().dot(op * psi.amplitudes()).real();
  return std::round(v / kResolution) * kResolution;
}

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

/// Observable value at the first jump of each trajectory whose label passes `select`.
template <typename Select>
std::vector<double> first_post_jump_values(const std::vector<LabelledTrajectory>& trajs,
                                           const CMatrix& op, Select select) {
  std::vector<double> out;
  for (const LabelledTrajectory& traj : trajs) {
    for (std::size_t i = 0; i < traj.events.size(); ++i) {
      if (select(traj.events[i].channel)) {
        out.push_back(expectation(op, traj.post_jump_states[i]));
        break;
      }
    }
  }
  return out;
}

/// Kolmogorov distribution tail Q_KS(lambda), alternating series.
double kolmogorov_q(double lambda) {
  const double a2 = -2.0 * lambda * lambda;
  double sign = 2.0;
  double sum = 0.0;
  double previous = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = sign * std::exp(a2 * j * j);
    sum += term;
    if (std::abs(term) <= 1e-3 * previous || std::abs(term) <= 1e-8 * sum) {
      return std::clamp(sum, 0.0, 1.0);
    }
    sign = -sign;
    previous = std::abs(term);
  }
  // No convergence: lambda is tiny and the tail is 1.
  return 1.0;
}

std::string kind_name(TestKind kind) {
  switch (kind) {
    case TestKind::Observable: return "observable";
    case TestKind::TotalCount: return "total_count";
    case TestKind::BlockCount: return "block_count";
    case TestKind::ChannelCount: return "channel_count";
    case TestKind::PostJump: return "post_jump";
  }
  return "?";
}

}  // namespace

RateFieldReport rate_field_scan(const Representation& a, const Representation& b,
                                const std::optional<std::vector<std::size_t>>& perm_c,
                                std::size_t n_states, std::uint64_t seed,
                                const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("rate_field_scan: dimension mismatch");
  }
  const SjedPartition pa = partition(a, tol);
  const SjedPartition pb = partition(b, tol);
  if (perm_c) {
    check_block_permutation(*perm_c, pb.block_count(), pa.block_count(), "perm_C");
  }
  RateFieldReport report;
  report.n_states = n_states;
  double worst = -1.0;
  std::mt19937_64 rng(seed);
  std::vector<CMatrix> acts_a(pa.block_count());
  std::vector<CMatrix> acts_b(pb.block_count());
  for (std::size_t n = 0; n < n_states; ++n) {
    const PureState psi = random_pure_state(a.dim(), rng);
    const CMatrix rho = psi.density();
    report.max_total_rate_dev =
        std::max(report.max_total_rate_dev, std::abs(total_rate(a, psi) - total_rate(b, psi)));
    for (std::size_t i = 0; i < pa.block_count(); ++i) {
      acts_a[i] = block_action(a, pa.blocks[i], rho);
    }
    for (std::size_t i = 0; i < pb.block_count(); ++i) {
      acts_b[i] = block_action(b, pb.blocks[i], rho);
    }

    PairDeviation state_dev;
    auto absorb = [&](const PairDeviation& d) {
      state_dev.action = std::max(state_dev.action, d.action);
      state_dev.rate = std::max(state_dev.rate, d.rate);
      state_dev.destination = std::max(state_dev.destination, d.destination);
    };
    if (perm_c) {
      for (std::size_t alpha = 0; alpha < pb.block_count(); ++alpha) {
        absorb(compare_actions(acts_b[alpha], acts_a[(*perm_c)[alpha]], tol));
      }
    } else {
      std::vector<bool> used(pa.block_count(), false);
      const CMatrix zero = CMatrix::Zero(a.dim(), a.dim());
      for (std::size_t alpha = 0; alpha < pb.block_count(); ++alpha) {
        std::size_t best = pa.block_count();
        double best_dev = 0.0;
        for (std::size_t beta = 0; beta < pa.block_count(); ++beta) {
          const double dev = (acts_b[alpha] - acts_a[beta]).norm();
          if (!used[beta] && (best == pa.block_count() || dev < best_dev)) {
            best = beta;
            best_dev = dev;
          }
        }
        if (best == pa.block_count()) {
          absorb(compare_actions(acts_b[alpha], zero, tol));
        } else {
          used[best] = true;
          absorb(compare_actions(acts_b[alpha], acts_a[best], tol));
        }
      }
      for (std::size_t beta = 0; beta < pa.block_count(); ++beta) {
        if (!used[beta]) {
          absorb(compare_actions(zero, acts_a[beta], tol));
        }
      }
    }
    report.max_block_action_dev = std::max(report.max_block_action_dev, state_dev.action);
    report.max_block_rate_dev = std::max(report.max_block_rate_dev, state_dev.rate);
    report.max_destination_dev = std::max(report.max_destination_dev, state_dev.destination);
    if (state_dev.action > worst) {
      worst = state_dev.action;
      report.worst_state = psi;
    }
  }
  return report;
}

MeanStateReport mean_state_check(const std::vector<LabelledTrajectory>& ensemble,
                                 const Representation& rep, const std::vector<double>& times) {
  if (ensemble.empty()) {
    throw std::invalid_argument("mean_state_check: empty ensemble");
  }
  const CMatrix rho0 = ensemble.front().initial_state.density();
  const CMatrix l = liouvillian_matrix(rep);
  MeanStateReport report;
  report.n_trajectories = ensemble.size();
  report.threshold = 4.0 / std::sqrt(static_cast<double>(ensemble.size()));
  for (double t : times) {
    const CMatrix exact = unvectorize(matrix_exponential(l * t) * vectorize(rho0), rep.dim());
    CMatrix mean = CMatrix::Zero(rep.dim(), rep.dim());
    for (const LabelledTrajectory& traj : ensemble) {
      mean += state_at(traj, rep, t).density();
    }
    mean /= static_cast<double>(ensemble.size());
    const double dev = (mean - exact).cwiseAbs().maxCoeff();
    report.times.push_back(t);
    report.deviations.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  return report;
}

std::vector<Observable> basis_projectors(int dim) {
  std::vector<Observable> out;
  for (int i = 0; i < dim; ++i) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(i, i) = 1.0;
    out.push_back({"P" + std::to_string(i), std::move(p)});
  }
  return out;
}

std::vector<Observable> parse_observables(const nlohmann::json& doc, int dim) {
  const nlohmann::json& list = doc.is_object() && doc.contains("observables") ? doc["observables"] : doc;
  if (!list.is_array()) {
    throw ParseError("observables: expected an array of {name, matrix} objects");
  }
  std::vector<Observable> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "observables[" + std::to_string(i) + "]";
    const auto& item = list[i];
    if (!item.is_object() || !item.contains("matrix")) {
      throw ParseError(where + ": missing field matrix");
    }
    Observable obs;
    obs.name = item.contains("name") && item["name"].is_string() ? item["name"].get<std::string>()
                                                                 : "O" + std::to_string(i + 1);
    obs.matrix = json_io::decode_matrix(item["matrix"], where + ".matrix");
    if (obs.matrix.rows() != dim || obs.matrix.cols() != dim) {
      throw ParseError(where + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                       " matrix");
    }
    if ((obs.matrix - obs.matrix.adjoint()).norm() > 1e-12 * std::max(1.0, obs.matrix.norm())) {
      throw ValidationError(where + ": observable not Hermitian");
    }
    out.push_back(std::move(obs));
  }
  return out;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((en + 0.12 + 0.11 / en) * d)};
}

ChiSquareResult chi_square_homogeneity(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("chi_square_homogeneity: empty sample");
  }
  std::map<std::size_t, std::pair<double, double>> cells;
  for (std::size_t v : a) cells[v].first += 1.0;
  for (std::size_t v : b) cells[v].second += 1.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;

  std::vector<std::pair<double, double>> bins;
  std::pair<double, double> open{0.0, 0.0};
  for (const auto& [value, counts] : cells) {
    open.first += counts.first;
    open.second += counts.second;
    const double pooled = open.first + open.second;
    if (std::min(na, nb) * pooled / n >= 5.0) {
      bins.push_back(open);
      open = {0.0, 0.0};
    }
  }
  if (open.first + open.second > 0.0) {
    if (bins.empty()) {
      bins.push_back(open);
    } else {
      bins.back().first += open.first;
      bins.back().second += open.second;
    }
  }
  ChiSquareResult result;
  if (bins.size() < 2) {
    return result;
  }
  for (const auto& [oa, ob] : bins) {
    const double pooled = oa + ob;
    const double ea = na * pooled / n;
    const double eb = nb * pooled / n;
    result.statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
  }
  result.dof = static_cast<int>(bins.size()) - 1;
  result.p_value = boost::math::gamma_q(0.5 * result.dof, 0.5 * result.statistic);
  return result;
}

double EnsembleComparison::threshold() const {
  return tests.empty() ? alpha : alpha / static_cast<double>(tests.size());
}

bool EnsembleComparison::verdict() const {
  if (incomparable) {
    return false;
  }
  const double thr = threshold();
  return std::all_of(tests.begin(), tests.end(),
                     [thr](const StatTest& t) { return t.p_value > thr; });
}

EnsembleComparison compare_ensembles(const Ensemble& a, const Ensemble& b,
                                     const std::vector<Observable>& observables,
                                     const std::vector<double>& times, Level level,
                                     const std::optional<std::vector<std::size_t>>& perm,
                                     double alpha, const Tolerance& tol) {
  if (level == Level::Qme) {
    throw std::invalid_argument("compare_ensembles: level must be t1, t2 or t3");
  }
  if (std::abs(a.t_max - b.t_max) > 1e-12 * std::max(a.t_max, b.t_max)) {
    throw std::invalid_argument("compare_ensembles: mismatched horizons");
  }
  if (a.trajectories.empty() || b.trajectories.empty()) {
    throw std::invalid_argument("compare_ensembles: empty ensemble");
  }
  if (a.rep.dim() != b.rep.dim()) {
    throw std::invalid_argument("compare_ensembles: dimension mismatch");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("compare_ensembles: alpha must lie in (0, 1)");
  }
  EnsembleComparison cmp;
  cmp.level = level;
  cmp.alpha = alpha;

  for (const Observable& obs : observables) {
    for (double t : times) {
      if (t < 0.0 || t > a.t_max) {
        throw std::invalid_argument("compare_ensembles: time outside [0, t_max]");
      }
      std::vector<double> xa;
      std::vector<double> xb;
      xa.reserve(a.trajectories.size());
      xb.reserve(b.trajectories.size());
      for (const auto& traj : a.trajectories) xa.push_back(expectation(obs.matrix, state_at(traj, a.rep, t)));
      for (const auto& traj : b.trajectories) xb.push_back(expectation(obs.matrix, state_at(traj, b.rep, t)));
      const KsResult ks = ks_two_sample(std::move(xa), std::move(xb));
      cmp.tests.push_back({TestKind::Observable, obs.name + "@" + format_time(t), ks.statistic,
                           ks.p_value, a.trajectories.size(), b.trajectories.size()});
    }
  }
  {
    std::vector<std::size_t> ca;
    std::vector<std::size_t> cb;
    for (const auto& traj : a.trajectories) ca.push_back(traj.events.size());
    for (const auto& traj : b.trajectories) cb.push_back(traj.events.size());
    const ChiSquareResult chi = chi_square_homogeneity(ca, cb);
    cmp.tests.push_back({TestKind::TotalCount, "total", chi.statistic, chi.p_value, ca.size(),
                         cb.size()});
  }
  if (level == Level::T1) {
    return cmp;
  }

  // Labels of b are mapped onto labels of a through `perm`.
  std::vector<std::size_t> map_a;
  std::vector<std::size_t> map_b;
  std::size_t n_labels = 0;
  TestKind count_kind = TestKind::BlockCount;
  if (level == Level::T3) {
    const SjedPartition pa = partition(a.rep, tol);
    const SjedPartition pb = partition(b.rep, tol);
    if (pa.block_count() != pb.block_count()) {
      cmp.incomparable = true;
      cmp.reason = "SJED counts differ (" + std::to_string(pa.block_count()) + " vs " +
                   std::to_string(pb.block_count()) + ")";
      return cmp;
    }
    n_labels = pb.block_count();
    map_a = pa.block_of;
    map_b = pb.block_of;
  } else {
    if (a.rep.jump_count() != b.rep.jump_count()) {
      cmp.incomparable = true;
      cmp.reason = "jump counts differ (" + std::to_string(a.rep.jump_count()) + " vs " +
                   std::to_string(b.rep.jump_count()) + ")";
      return cmp;
    }
    n_labels = b.rep.jump_count();
    map_a.resize(n_labels);
    map_b.resize(n_labels);
    for (std::size_t k = 0; k < n_labels; ++k) map_a[k] = map_b[k] = k;
    count_kind = TestKind::ChannelCount;
  }
  std::vector<std::size_t> p(n_labels);
  for (std::size_t i = 0; i < n_labels; ++i) p[i] = i;
  if (perm) {
    check_block_permutation(*perm, n_labels, n_labels, level == Level::T3 ? "perm_C" : "perm");
    p = *perm;
  }

  const std::string prefix = level == Level::T3 ? "block " : "channel ";
  for (std::size_t lb = 0; lb < n_labels; ++lb) {
    const std::size_t la = p[lb];
    const std::string label = prefix + std::to_string(lb + 1) + "~" + std::to_string(la + 1);
    std::vector<std::size_t> ca;
    std::vector<std::size_t> cb;
    for (const auto& traj : a.trajectories) {
      ca.push_back(static_cast<std::size_t>(std::count_if(
          traj.events.begin(), traj.events.end(),
          [&](const JumpEvent& e) { return map_a[e.channel] == la; })));
    }
    for (const auto& traj : b.trajectories) {
      cb.push_back(static_cast<std::size_t>(std::count_if(
          traj.events.begin(), traj.events.end(),
          [&](const JumpEvent& e) { return map_b[e.channel] == lb; })));
    }
    const ChiSquareResult chi = chi_square_homogeneity(ca, cb);
    cmp.tests.push_back({count_kind, label, chi.statistic, chi.p_value, ca.size(), cb.size()});

    // Where the jumps of this label send the state: counts alone cannot tell
    // two labels apart when their rates coincide.
    for (const Observable& obs : observables) {
      const auto xa = first_post_jump_values(a.trajectories, obs.matrix,
                                             [&](std::size_t k) { return map_a[k] == la; });
      const auto xb = first_post_jump_values(b.trajectories, obs.matrix,
                                             [&](std::size_t k) { return map_b[k] == lb; });
      if (xa.empty() || xb.empty()) {
        continue;
      }
      const KsResult ks = ks_two_sample(xa, xb);
      cmp.tests.push_back({TestKind::PostJump, label + " " + obs.name, ks.statistic, ks.p_value,
                           xa.size(), xb.size()});
    }
  }
  return cmp;
}

nlohmann::json to_json(const RateFieldReport& report) {
  nlohmann::json j;
  j["n_states"] = report.n_states;
  j["max_total_rate_dev"] = report.max_total_rate_dev;
  j["max_block_action_dev"] = report.max_block_action_dev;
  j["max_block_rate_dev"] = report.max_block_rate_dev;
  j["max_destination_dev"] = report.max_destination_dev;
  j["worst_state"] =
      report.worst_state ? json_io::encode(*report.worst_state) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json to_json(const MeanStateReport& report) {
  nlohmann::json j;
  j["n_trajectories"] = report.n_trajectories;
  j["times"] = report.times;
  j["deviations"] = report.deviations;
  j["max_deviation"] = report.max_deviation;
  j["threshold"] = report.threshold;
  j["passes"] = report.passes();
  return j;
}

nlohmann::json to_json(const EnsembleComparison& cmp) {
  nlohmann::json j;
  j["level"] = to_string(cmp.level);
  j["alpha"] = cmp.alpha;
  j["n_tests"] = cmp.tests.size();
  j["threshold"] = cmp.threshold();
  j["incomparable"] = cmp.incomparable;
  j["reason"] = cmp.reason;
  j["ks_statistics"] = nlohmann::json::array();
  j["count_tests"] = nlohmann::json::array();
  for (const StatTest& t : cmp.tests) {
    nlohmann::json row{{"kind", kind_name(t.kind)}, {"label", t.label}, {"statistic", t.statistic},
                       {"p", t.p_value}, {"n_a", t.n_a}, {"n_b", t.n_b}};
    const bool is_count = t.kind == TestKind::TotalCount || t.kind == TestKind::BlockCount ||
                          t.kind == TestKind::ChannelCount;
    j[is_count ? "count_tests" : "ks_statistics"].push_back(std::move(row));
  }
  j["verdict"] = cmp.verdict();
  return j;
}

}  // namespace uqd
