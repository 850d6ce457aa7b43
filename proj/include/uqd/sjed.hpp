#pragma once

// Sets of jumps with equal destinations (SJEDs).
//
// Two jump operators have equal destinations exactly when they are both rank
// one with parallel images, or when they are proportional. The classes of
// that relation are either reset blocks (J_k = sqrt(g_k)|chi><xi_k|, composite
// action Tr(Gamma psi)|chi><chi|) or non-reset blocks (J_k = lambda_k J with
// rank J >= 2, composite action |lambda|^2 J psi J^dag).

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "uqd/representation.hpp"

namespace uqd {

struct ResetKind {
  PureState chi;
  /// sum_k J_k^dag J_k over the block; Hermitian PSD.
  CMatrix gamma;
};

struct NonResetKind {
  /// sqrt(sum_k |lambda_k|^2) > 0
  double lambda = 0.0;
  /// Unit Frobenius norm; first non-negligible row-major entry real positive.
  CMatrix j_canonical;
};

struct SjedBlock {
  /// 0-based jump indices, ascending.
  std::vector<std::size_t> indices;
  std::variant<ResetKind, NonResetKind> kind;

  bool is_reset() const { return std::holds_alternative<ResetKind>(kind); }
  const ResetKind& reset() const { return std::get<ResetKind>(kind); }
  const NonResetKind& non_reset() const { return std::get<NonResetKind>(kind); }
};

struct SjedPartition {
  std::vector<SjedBlock> blocks;
  /// block_of[k] is the block containing jump k.
  std::vector<std::size_t> block_of;

  std::size_t block_count() const { return blocks.size(); }
};

bool are_jed(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

/// Blocks ordered by smallest member index.
SjedPartition partition(const Representation& rep, const Tolerance& tol = {});

/// Superoperator matrix of sum_{k in block} J_k . J_k^dag.
CMatrix composite_action(const Representation& rep, const SjedBlock& block);

/// Fewest jump operators reproducing the block's composite action. Reset
/// blocks yield sqrt(g')|chi><xi'| per eigenpair of Gamma in descending
/// eigenvalue order; non-reset blocks yield lambda * j_canonical.
std::vector<CMatrix> minimal_block_representation(const SjedBlock& block,
                                                  const Tolerance& tol = {});

Representation minimize_representation(const Representation& rep, const Tolerance& tol = {});

/// Threshold on rates and destination separation for witness states.
inline constexpr double kWitnessThreshold = 1e-6;

struct WitnessViolation {
  enum class Kind { ZeroRate, EqualDestinations };
  Kind kind;
  /// 0 for the first representation, 1 for the second.
  int rep_index;
  std::size_t jump;
  /// Second jump for EqualDestinations.
  std::size_t other_jump = 0;
};

/// Conditions a witness must meet: every rate of both representations above
/// the threshold and jumps in distinct blocks leading to destinations at
/// trace distance above the threshold.
std::vector<WitnessViolation> witness_violations(const Representation& a,
                                                 const Representation& b,
                                                 const PureState& psi,
                                                 const Tolerance& tol = {});

class WitnessNotFound : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Searches for a witness state starting from `start` (or a Haar-random state)
/// and removing degeneracies by small additive perturbations. Gives up after
/// 1000 attempts.
PureState find_witness_state(const Representation& a, const Representation& b,
                             std::uint64_t seed, const Tolerance& tol = {},
                             std::optional<PureState> start = std::nullopt);

}  // namespace uqd
