#pragma once

// Equivalence of two representations at three levels:
//   qme  - same Liouvillian,
//   t1   - same unravelled trajectory ensemble (H~ = H + r, A~_a = A_pi(a)),
//   t2   - same labelled ensemble (J~_k = e^{i phi_k} J_pi(k)),
//   t3   - same partially-labelled ensemble for a given block permutation.
//
// Direction convention: repA holds (H, J), repB holds (H~, J~). Permutations
// are indexed by repB and point into repA. Everything is 0-based here; the
// JSON encoding shifts indices to 1-based.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqd/sjed.hpp"

namespace uqd {

enum class Level { Qme, T1, T2, T3 };

Level parse_level(const std::string& s);
std::string to_string(Level level);

struct BlockVerdict {
  bool holds = false;
  double shift_r = 0.0;
  /// perm_c[alpha] = block of repA matched with block alpha of repB.
  std::vector<std::size_t> perm_c;
};

struct JumpMatching {
  /// perm[k] = jump of repA with J~_k = e^{i phases[k]} J_perm[k].
  std::vector<std::size_t> perm;
  /// Radians in (-pi, pi].
  std::vector<double> phases;
};

struct LabelledVerdict {
  bool holds = false;
  double shift_r = 0.0;
  std::vector<JumpMatching> matchings;
  /// More than one valid matching exists.
  bool multiple = false;
  /// Enumeration stopped at the cap.
  bool truncated = false;
};

struct EquivalenceReport {
  bool same_qme = false;
  BlockVerdict theorem1;
  LabelledVerdict theorem2;
  BlockVerdict theorem3;
  std::vector<std::string> diagnostics;

  bool holds(Level level) const;
};

struct CheckOptions {
  std::optional<std::vector<std::size_t>> perm_c;
  bool all_perms = false;
  /// Upper bound on enumerated matchings when all_perms is set.
  std::size_t max_matchings = 10000;
};

/// Thrown when a construction requires trajectory equivalence that is absent.
class EquivalenceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool same_liouvillian(const Representation& a, const Representation& b,
                      const Tolerance& tol = {});

BlockVerdict check_theorem1(const Representation& a, const Representation& b,
                            const Tolerance& tol = {},
                            std::vector<std::string>* diagnostics = nullptr);

LabelledVerdict check_theorem2(const Representation& a, const Representation& b,
                               const Tolerance& tol = {}, bool all_perms = false,
                               std::size_t max_matchings = 10000,
                               std::vector<std::string>* diagnostics = nullptr);

/// With perm_c, verifies exactly that block assignment; without, searches.
BlockVerdict check_theorem3(const Representation& a, const Representation& b,
                            const Tolerance& tol = {},
                            const std::optional<std::vector<std::size_t>>& perm_c = std::nullopt,
                            std::vector<std::string>* diagnostics = nullptr);

EquivalenceReport check_equivalence(const Representation& a, const Representation& b,
                                    const Tolerance& tol = {}, const CheckOptions& opts = {});

/// Block isometry V (d x d') of the gauge J_j = sum_k V_jk J'_k. Output jump j
/// belongs to row block alpha; row block alpha draws only on the jumps of
/// block block_map[alpha] of the minimal representation.
struct BlockIsometry {
  CMatrix matrix;
  std::vector<std::vector<std::size_t>> row_blocks;
  std::vector<std::size_t> block_map;

  /// V^(alpha): rows of row block alpha, columns of its source block.
  CMatrix sub_isometry(std::size_t alpha, const SjedPartition& min_part) const;
};

/// True when every block uses the fewest operators for its composite action.
bool is_minimal(const Representation& rep, const Tolerance& tol = {});

Representation apply_gauge(const Representation& rep_min, const BlockIsometry& iso, double r,
                           const Tolerance& tol = {});

BlockIsometry extract_isometry(const Representation& rep_min, const Representation& rep,
                               const Tolerance& tol = {});

nlohmann::json to_json(const EquivalenceReport& report);
nlohmann::json to_json(const BlockIsometry& iso);
BlockIsometry block_isometry_from_json(const nlohmann::json& j);

}  // namespace uqd
