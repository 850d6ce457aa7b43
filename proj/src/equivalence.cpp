#include "uqd/equivalence.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "uqd/json_io.hpp"

namespace uqd {

namespace {

void note(std::vector<std::string>* diagnostics, std::string msg) {
  if (diagnostics) {
    diagnostics->push_back(std::move(msg));
  }
}

std::string pair_text(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a) + " vs " + std::to_string(b) + ")";
}

/// Real r with H_b = H_a + r * 1.
std::optional<double> hamiltonian_shift(const Representation& a, const Representation& b,
                                        const Tolerance& tol,
                                        std::vector<std::string>* diagnostics) {
  const auto z = identity_shift(b.hamiltonian - a.hamiltonian, tol);
  if (!z || std::abs(z->imag()) > tol.atol()) {
    note(diagnostics, "Hamiltonians differ by more than a real multiple of the identity");
    return std::nullopt;
  }
  return z->real();
}

struct Blocks {
  SjedPartition part;
  std::vector<CMatrix> actions;
};

Blocks block_data(const Representation& rep, const Tolerance& tol) {
  Blocks out{partition(rep, tol), {}};
  for (const SjedBlock& block : out.part.blocks) {
    out.actions.push_back(composite_action(rep, block));
  }
  return out;
}

/// Theorem-3 style check: shift plus block actions, no Liouvillian precondition.
BlockVerdict match_blocks(const Representation& a, const Representation& b, const Tolerance& tol,
                          const std::optional<std::vector<std::size_t>>& forced,
                          std::vector<std::string>* diagnostics) {
  BlockVerdict verdict;
  const Blocks ba = block_data(a, tol);
  const Blocks bb = block_data(b, tol);
  if (forced && forced->size() != bb.part.block_count()) {
    throw std::invalid_argument("perm_C has length " + std::to_string(forced->size()) +
                                ", expected " + std::to_string(bb.part.block_count()));
  }
  if (a.dim() != b.dim()) {
    note(diagnostics, "dimension mismatch " + pair_text(a.dim(), b.dim()));
    return verdict;
  }
  const auto r = hamiltonian_shift(a, b, tol, diagnostics);
  if (!r) {
    return verdict;
  }
  verdict.shift_r = *r;
  const std::size_t dc = bb.part.block_count();
  if (ba.part.block_count() != dc) {
    note(diagnostics,
         "SJED counts differ " + pair_text(ba.part.block_count(), bb.part.block_count()));
    return verdict;
  }

  std::vector<std::size_t> perm(dc, dc);
  if (forced) {
    std::vector<bool> seen(dc, false);
    for (std::size_t alpha = 0; alpha < dc; ++alpha) {
      const std::size_t target = (*forced)[alpha];
      if (target >= dc || seen[target]) {
        throw std::invalid_argument("perm_C is not a permutation of 1.." + std::to_string(dc));
      }
      seen[target] = true;
    }
    bool ok = true;
    for (std::size_t alpha = 0; alpha < dc; ++alpha) {
      const std::size_t target = (*forced)[alpha];
      if (!approx_equal(bb.actions[alpha], ba.actions[target], tol)) {
        note(diagnostics, "composite action of SJED " + std::to_string(alpha + 1) +
                              " differs from SJED " + std::to_string(target + 1));
        ok = false;
      }
    }
    if (!ok) {
      return verdict;
    }
    perm = *forced;
  } else {
    std::vector<bool> used(dc, false);
    for (std::size_t alpha = 0; alpha < dc; ++alpha) {
      for (std::size_t beta = 0; beta < dc; ++beta) {
        if (!used[beta] && approx_equal(bb.actions[alpha], ba.actions[beta], tol)) {
          perm[alpha] = beta;
          used[beta] = true;
          break;
        }
      }
      if (perm[alpha] == dc) {
        note(diagnostics, "no SJED matches the composite action of SJED " +
                              std::to_string(alpha + 1));
        return verdict;
      }
    }
  }
  verdict.perm_c = std::move(perm);
  verdict.holds = true;
  return verdict;
}

struct Edge {
  std::size_t target;
  double phase;
};

/// Kuhn's augmenting-path test for a perfect matching.
bool has_perfect_matching(const std::vector<std::vector<Edge>>& edges, std::size_t n) {
  std::vector<std::size_t> owner(n, n);
  std::vector<bool> visited;
  auto augment = [&](auto&& self, std::size_t k) -> bool {
    for (const Edge& e : edges[k]) {
      if (visited[e.target]) {
        continue;
      }
      visited[e.target] = true;
      if (owner[e.target] == n || self(self, owner[e.target])) {
        owner[e.target] = k;
        return true;
      }
    }
    return false;
  };
  for (std::size_t k = 0; k < edges.size(); ++k) {
    visited.assign(n, false);
    if (!augment(augment, k)) {
      return false;
    }
  }
  return true;
}

class MatchingEnumerator {
 public:
  MatchingEnumerator(const std::vector<std::vector<Edge>>& edges, std::size_t cap, bool keep_all)
      : edges_(edges), cap_(cap), keep_all_(keep_all), used_(edges.size(), false),
        perm_(edges.size()), phases_(edges.size()) {}

  void run() { descend(0); }

  std::size_t count() const { return count_; }
  const std::vector<JumpMatching>& found() const { return found_; }

 private:
  void descend(std::size_t k) {
    if (count_ >= cap_) {
      return;
    }
    if (k == edges_.size()) {
      if (keep_all_ || found_.empty()) {
        found_.push_back({perm_, phases_});
      }
      ++count_;
      return;
    }
    for (const Edge& e : edges_[k]) {
      if (used_[e.target]) {
        continue;
      }
      used_[e.target] = true;
      perm_[k] = e.target;
      phases_[k] = e.phase;
      descend(k + 1);
      used_[e.target] = false;
      if (count_ >= cap_) {
        return;
      }
    }
  }

  const std::vector<std::vector<Edge>>& edges_;
  std::size_t cap_;
  bool keep_all_;
  std::vector<bool> used_;
  std::vector<std::size_t> perm_;
  std::vector<double> phases_;
  std::size_t count_ = 0;
  std::vector<JumpMatching> found_;
};

std::size_t minimal_size(const SjedBlock& block, const Tolerance& tol) {
  return minimal_block_representation(block, tol).size();
}

void require_minimal(const Representation& rep, const Tolerance& tol) {
  if (!is_minimal(rep, tol)) {
    throw std::invalid_argument("representation '" + rep.label +
                                "' is not minimal; run minimize first");
  }
}

nlohmann::json block_verdict_json(const BlockVerdict& v) {
  nlohmann::json j;
  j["holds"] = v.holds;
  j["shift_r"] = v.holds ? nlohmann::json(v.shift_r) : nlohmann::json(nullptr);
  j["perm_C"] = v.holds ? json_io::one_based(v.perm_c) : nlohmann::json(nullptr);
  return j;
}

}  // namespace

Level parse_level(const std::string& s) {
  if (s == "qme") return Level::Qme;
  if (s == "t1") return Level::T1;
  if (s == "t2") return Level::T2;
  if (s == "t3") return Level::T3;
  throw std::invalid_argument("unknown level '" + s + "' (expected qme, t1, t2 or t3)");
}

std::string to_string(Level level) {
  switch (level) {
    case Level::Qme: return "qme";
    case Level::T1: return "t1";
    case Level::T2: return "t2";
    case Level::T3: return "t3";
  }
  return "?";
}

bool EquivalenceReport::holds(Level level) const {
  switch (level) {
    case Level::Qme: return same_qme;
    case Level::T1: return theorem1.holds;
    case Level::T2: return theorem2.holds;
    case Level::T3: return theorem3.holds;
  }
  return false;
}

bool same_liouvillian(const Representation& a, const Representation& b, const Tolerance& tol) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("same_liouvillian: dimension mismatch " +
                                pair_text(a.dim(), b.dim()));
  }
  return approx_equal(liouvillian_matrix(a), liouvillian_matrix(b), tol);
}

BlockVerdict check_theorem1(const Representation& a, const Representation& b,
                            const Tolerance& tol, std::vector<std::string>* diagnostics) {
  if (a.dim() != b.dim()) {
    note(diagnostics, "dimension mismatch " + pair_text(a.dim(), b.dim()));
    return {};
  }
  if (!same_liouvillian(a, b, tol)) {
    note(diagnostics, "different QME");
    return {};
  }
  return match_blocks(a, b, tol, std::nullopt, diagnostics);
}

LabelledVerdict check_theorem2(const Representation& a, const Representation& b,
                               const Tolerance& tol, bool all_perms, std::size_t max_matchings,
                               std::vector<std::string>* diagnostics) {
  LabelledVerdict verdict;
  require_valid(a, tol);
  require_valid(b, tol);
  if (a.dim() != b.dim()) {
    note(diagnostics, "dimension mismatch " + pair_text(a.dim(), b.dim()));
    return verdict;
  }
  const std::size_t d = a.jump_count();
  if (b.jump_count() != d) {
    note(diagnostics, "jump counts differ " + pair_text(d, b.jump_count()));
    return verdict;
  }
  if (d > 64) {
    throw std::invalid_argument("check_theorem2: at most 64 jump operators supported");
  }
  const auto r = hamiltonian_shift(a, b, tol, diagnostics);
  if (!r) {
    return verdict;
  }
  verdict.shift_r = *r;

  const double unit_tol = tol.bound(1.0);
  std::vector<std::vector<Edge>> edges(d);
  std::vector<bool> reached(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t j = 0; j < d; ++j) {
      const auto lambda = proportionality_coefficient(b.jumps[k], a.jumps[j], tol);
      if (lambda && std::abs(std::abs(*lambda) - 1.0) <= unit_tol) {
        edges[k].push_back({j, wrap_phase(std::arg(*lambda))});
        reached[j] = true;
      }
    }
    if (edges[k].empty()) {
      note(diagnostics, "jump " + std::to_string(k + 1) +
                            " has no counterpart equal up to a phase");
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (!reached[j]) {
      note(diagnostics, "jump " + std::to_string(j + 1) +
                            " of the first representation is matched by no jump");
    }
  }
  if (!has_perfect_matching(edges, d)) {
    note(diagnostics, "no permutation matches the jump operators up to phases");
    return verdict;
  }
  const std::size_t cap = all_perms ? std::max<std::size_t>(max_matchings, 1) : 2;
  MatchingEnumerator enumerator(edges, cap, all_perms);
  enumerator.run();
  verdict.matchings = enumerator.found();
  verdict.holds = !verdict.matchings.empty();
  verdict.multiple = enumerator.count() > 1;
  verdict.truncated = all_perms && enumerator.count() >= cap;
  return verdict;
}

BlockVerdict check_theorem3(const Representation& a, const Representation& b,
                            const Tolerance& tol,
                            const std::optional<std::vector<std::size_t>>& perm_c,
                            std::vector<std::string>* diagnostics) {
  return match_blocks(a, b, tol, perm_c, diagnostics);
}

EquivalenceReport check_equivalence(const Representation& a, const Representation& b,
                                    const Tolerance& tol, const CheckOptions& opts) {
  require_valid(a, tol);
  require_valid(b, tol);
  EquivalenceReport report;
  if (a.dim() != b.dim()) {
    report.diagnostics.push_back("dimension mismatch " + pair_text(a.dim(), b.dim()));
    return report;
  }
  report.same_qme = same_liouvillian(a, b, tol);
  report.theorem1 = check_theorem1(a, b, tol, &report.diagnostics);
  report.theorem2 =
      check_theorem2(a, b, tol, opts.all_perms, opts.max_matchings, &report.diagnostics);
  std::vector<std::string> t3_notes;
  report.theorem3 = check_theorem3(a, b, tol, opts.perm_c, &t3_notes);
  // Theorem-3 notes repeat theorem-1 notes unless a permutation was forced.
  if (opts.perm_c) {
    for (auto& n : t3_notes) {
      report.diagnostics.push_back("theorem 3: " + n);
    }
  }
  std::sort(report.diagnostics.begin(), report.diagnostics.end());
  report.diagnostics.erase(std::unique(report.diagnostics.begin(), report.diagnostics.end()),
                           report.diagnostics.end());
  return report;
}

CMatrix BlockIsometry::sub_isometry(std::size_t alpha, const SjedPartition& min_part) const {
  if (alpha >= row_blocks.size()) {
    throw std::out_of_range("sub_isometry: block index out of range");
  }
  const auto& rows = row_blocks[alpha];
  const auto& cols = min_part.blocks.at(block_map.at(alpha)).indices;
  CMatrix sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          matrix(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return sub;
}

bool is_minimal(const Representation& rep, const Tolerance& tol) {
  const SjedPartition part = partition(rep, tol);
  return std::all_of(part.blocks.begin(), part.blocks.end(), [&](const SjedBlock& block) {
    return block.indices.size() == minimal_size(block, tol);
  });
}

Representation apply_gauge(const Representation& rep_min, const BlockIsometry& iso, double r,
                           const Tolerance& tol) {
  require_minimal(rep_min, tol);
  const SjedPartition min_part = partition(rep_min, tol);
  const CMatrix& v = iso.matrix;
  const auto dprime = static_cast<Eigen::Index>(rep_min.jump_count());
  if (v.cols() != dprime) {
    throw std::invalid_argument("isometry has " + std::to_string(v.cols()) +
                                " columns but the representation has " +
                                std::to_string(dprime) + " jumps");
  }
  const double iso_dev = (v.adjoint() * v - CMatrix::Identity(dprime, dprime)).norm();
  if (iso_dev > tol.bound(1.0)) {
    std::ostringstream msg;
    msg << "matrix is not an isometry (||V^dag V - 1|| = " << iso_dev << ")";
    throw NumericError(msg.str());
  }
  if (iso.row_blocks.size() != iso.block_map.size() ||
      iso.block_map.size() != min_part.block_count()) {
    throw std::invalid_argument("block-structure violation: expected " +
                                std::to_string(min_part.block_count()) + " blocks");
  }
  const auto d = static_cast<std::size_t>(v.rows());
  std::vector<std::size_t> row_owner(d, d);
  std::vector<bool> source_used(min_part.block_count(), false);
  for (std::size_t alpha = 0; alpha < iso.row_blocks.size(); ++alpha) {
    const std::size_t src = iso.block_map[alpha];
    if (src >= min_part.block_count() || source_used[src]) {
      throw std::invalid_argument("block-structure violation: block_map is not a permutation");
    }
    source_used[src] = true;
    for (std::size_t j : iso.row_blocks[alpha]) {
      if (j >= d || row_owner[j] != d) {
        throw std::invalid_argument("block-structure violation: row blocks do not partition rows");
      }
      row_owner[j] = alpha;
    }
  }
  if (std::find(row_owner.begin(), row_owner.end(), d) != row_owner.end()) {
    throw std::invalid_argument("block-structure violation: row blocks do not cover all rows");
  }
  for (std::size_t j = 0; j < d; ++j) {
    const std::size_t src = iso.block_map[row_owner[j]];
    for (Eigen::Index k = 0; k < dprime; ++k) {
      const auto ks = static_cast<std::size_t>(k);
      if (min_part.block_of[ks] != src && std::abs(v(static_cast<Eigen::Index>(j), k)) > tol.atol()) {
        throw std::invalid_argument("block-structure violation: V(" + std::to_string(j + 1) +
                                    "," + std::to_string(k + 1) + ") couples different SJEDs");
      }
    }
  }

  Representation out;
  out.label = rep_min.label.empty() ? "gauged" : rep_min.label + "-gauged";
  out.hamiltonian = shift_hamiltonian(rep_min, r).hamiltonian;
  for (std::size_t j = 0; j < d; ++j) {
    CMatrix jj = CMatrix::Zero(rep_min.dim(), rep_min.dim());
    for (Eigen::Index k = 0; k < dprime; ++k) {
      jj += v(static_cast<Eigen::Index>(j), k) * rep_min.jumps[static_cast<std::size_t>(k)];
    }
    if (jj.norm() <= tol.atol()) {
      throw NumericError("gauge produces a zero jump operator at index " + std::to_string(j + 1));
    }
    out.jumps.push_back(std::move(jj));
  }
  if (!check_theorem1(rep_min, out, tol).holds) {
    throw std::logic_error("apply_gauge: output is not trajectory-equivalent to its input");
  }
  return out;
}

BlockIsometry extract_isometry(const Representation& rep_min, const Representation& rep,
                               const Tolerance& tol) {
  require_minimal(rep_min, tol);
  const BlockVerdict t1 = check_theorem1(rep_min, rep, tol);
  if (!t1.holds) {
    throw EquivalenceError("representations not trajectory-equivalent");
  }
  const SjedPartition min_part = partition(rep_min, tol);
  const SjedPartition part = partition(rep, tol);
  BlockIsometry iso;
  const auto d = static_cast<Eigen::Index>(rep.jump_count());
  const auto dprime = static_cast<Eigen::Index>(rep_min.jump_count());
  iso.matrix = CMatrix::Zero(d, dprime);
  for (std::size_t alpha = 0; alpha < part.block_count(); ++alpha) {
    const std::size_t src = t1.perm_c[alpha];
    const auto& cols = min_part.blocks[src].indices;
    const auto n2 = static_cast<Eigen::Index>(rep.dim()) * rep.dim();
    CMatrix basis(n2, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      basis.col(static_cast<Eigen::Index>(c)) = vectorize(rep_min.jumps[cols[c]]);
    }
    const Eigen::ColPivHouseholderQR<CMatrix> qr(basis);
    for (std::size_t j : part.blocks[alpha].indices) {
      const CVector target = vectorize(rep.jumps[j]);
      const CVector coef = qr.solve(target);
      const double residual = (basis * coef - target).norm();
      if (residual > tol.bound(target.norm())) {
        std::ostringstream msg;
        msg << "jump " << j + 1 << " is not in the span of its source SJED (residual "
            << residual << ")";
        throw NumericError(msg.str());
      }
      for (std::size_t c = 0; c < cols.size(); ++c) {
        iso.matrix(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(cols[c])) =
            coef(static_cast<Eigen::Index>(c));
      }
    }
    iso.row_blocks.push_back(part.blocks[alpha].indices);
    iso.block_map.push_back(src);
  }
  const double iso_dev =
      (iso.matrix.adjoint() * iso.matrix - CMatrix::Identity(dprime, dprime)).norm();
  if (iso_dev > tol.bound(1.0)) {
    std::ostringstream msg;
    msg << "extracted matrix is not an isometry (||V^dag V - 1|| = " << iso_dev << ")";
    throw NumericError(msg.str());
  }
  return iso;
}

nlohmann::json to_json(const EquivalenceReport& report) {
  nlohmann::json j;
  j["same_qme"] = report.same_qme;
  j["theorem1"] = block_verdict_json(report.theorem1);
  nlohmann::json t2;
  t2["holds"] = report.theorem2.holds;
  t2["shift_r"] = report.theorem2.holds ? nlohmann::json(report.theorem2.shift_r)
                                        : nlohmann::json(nullptr);
  t2["perms"] = nlohmann::json::array();
  for (const JumpMatching& m : report.theorem2.matchings) {
    t2["perms"].push_back({{"perm", json_io::one_based(m.perm)}, {"phases", m.phases}});
  }
  t2["multiple"] = report.theorem2.multiple;
  t2["truncated"] = report.theorem2.truncated;
  j["theorem2"] = std::move(t2);
  j["theorem3"] = block_verdict_json(report.theorem3);
  j["diagnostics"] = report.diagnostics;
  return j;
}

nlohmann::json to_json(const BlockIsometry& iso) {
  nlohmann::json j;
  j["rows"] = iso.matrix.rows();
  j["cols"] = iso.matrix.cols();
  j["matrix"] = json_io::encode(iso.matrix);
  j["row_blocks"] = nlohmann::json::array();
  for (const auto& rows : iso.row_blocks) {
    j["row_blocks"].push_back(json_io::one_based(rows));
  }
  j["block_map"] = json_io::one_based(iso.block_map);
  return j;
}

BlockIsometry block_isometry_from_json(const nlohmann::json& j) {
  auto one_based_list = [](const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array()) {
      throw ParseError(where + ": expected an array of 1-based indices");
    }
    std::vector<std::size_t> out;
    for (const auto& x : arr) {
      if (!x.is_number_integer() || x.get<long long>() < 1) {
        throw ParseError(where + ": indices must be positive integers");
      }
      out.push_back(static_cast<std::size_t>(x.get<long long>() - 1));
    }
    return out;
  };
  if (!j.is_object()) {
    throw ParseError("isometry document must be a JSON object");
  }
  for (const char* field : {"matrix", "row_blocks", "block_map"}) {
    if (!j.contains(field)) {
      throw ParseError(std::string("missing field ") + field);
    }
  }
  BlockIsometry iso;
  iso.matrix = json_io::decode_matrix(j["matrix"], "matrix");
  if (!j["row_blocks"].is_array()) {
    throw ParseError("row_blocks: expected an array");
  }
  for (std::size_t a = 0; a < j["row_blocks"].size(); ++a) {
    iso.row_blocks.push_back(
        one_based_list(j["row_blocks"][a], "row_blocks[" + std::to_string(a) + "]"));
  }
  iso.block_map = one_based_list(j["block_map"], "block_map");
  return iso;
}

}  // namespace uqd
