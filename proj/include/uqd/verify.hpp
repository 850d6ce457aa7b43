#pragma once

// Cross-checks between algebraic verdicts and simulated behaviour: pointwise
// rate-field scans, mean-state consistency with the master equation, and
// two-sample statistics over trajectory ensembles.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqd/equivalence.hpp"
#include "uqd/trajectory.hpp"

namespace uqd {

struct RateFieldReport {
  std::size_t n_states = 0;
  double max_total_rate_dev = 0.0;
  /// max ||A~_alpha(psi) - A_{pi(alpha)}(psi)||_F
  double max_block_action_dev = 0.0;
  double max_block_rate_dev = 0.0;
  /// Trace distance between normalised block destinations.
  double max_destination_dev = 0.0;
  /// State with the largest block-action deviation.
  std::optional<PureState> worst_state;
};

/// perm_c[alpha] = block of `a` matched with block alpha of `b`. Without a
/// permutation each block of `b` is paired, state by state, with the closest
/// unused block of `a`; blocks left unpaired count with their full action.
RateFieldReport rate_field_scan(const Representation& a, const Representation& b,
                                const std::optional<std::vector<std::size_t>>& perm_c,
                                std::size_t n_states, std::uint64_t seed,
                                const Tolerance& tol = {});

struct MeanStateReport {
  std::size_t n_trajectories = 0;
  std::vector<double> times;
  std::vector<double> deviations;
  double max_deviation = 0.0;
  /// 4 / sqrt(N)
  double threshold = 0.0;

  bool passes() const { return max_deviation < threshold; }
};

/// Compares the sample mean of psi_t with exp(L t) rho_0 entrywise.
MeanStateReport mean_state_check(const std::vector<LabelledTrajectory>& ensemble,
                                 const Representation& rep, const std::vector<double>& times);

struct Observable {
  std::string name;
  CMatrix matrix;
};

/// |i><i| for every basis state.
std::vector<Observable> basis_projectors(int dim);

std::vector<Observable> parse_observables(const nlohmann::json& doc, int dim);

struct Ensemble {
  Representation rep;
  std::vector<LabelledTrajectory> trajectories;
  double t_max = 0.0;
};

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Homogeneity test of two samples of non-negative integers. Adjacent values
/// are pooled until every expected cell count reaches 5.
ChiSquareResult chi_square_homogeneity(const std::vector<std::size_t>& a,
                                       const std::vector<std::size_t>& b);

enum class TestKind { Observable, TotalCount, BlockCount, ChannelCount, PostJump };

struct StatTest {
  TestKind kind;
  std::string label;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

struct EnsembleComparison {
  Level level = Level::T1;
  double alpha = 0.01;
  std::vector<StatTest> tests;
  /// Set when the records cannot be compared at the requested level.
  bool incomparable = false;
  std::string reason;

  double threshold() const;
  bool verdict() const;
};

/// `perm` maps indices of b onto a: block permutation for t3, jump
/// permutation for t2, ignored for t1. Identity when absent.
EnsembleComparison compare_ensembles(const Ensemble& a, const Ensemble& b,
                                     const std::vector<Observable>& observables,
                                     const std::vector<double>& times, Level level,
                                     const std::optional<std::vector<std::size_t>>& perm = {},
                                     double alpha = 0.01, const Tolerance& tol = {});

nlohmann::json to_json(const RateFieldReport& report);
nlohmann::json to_json(const MeanStateReport& report);
nlohmann::json to_json(const EnsembleComparison& cmp);

}  // namespace uqd
