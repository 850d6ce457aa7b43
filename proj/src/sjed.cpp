#include "uqd/sjed.hpp"

#include <algorithm>
#include <numeric>

namespace uqd {

namespace {

/// Union-find over jump indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      // Keep the smaller index as root so roots are block minima.
      if (b < a) {
        std::swap(a, b);
      }
      parent_[b] = a;
    }
  }

 private:
  std::vector<std::size_t> parent_;
};

CVector leading_left_singular_vector(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().col(0);
}

/// Lexicographic order on (re, im) pairs of the entries.
bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) {
      return a(i).real() < b(i).real();
    }
    if (a(i).imag() != b(i).imag()) {
      return a(i).imag() < b(i).imag();
    }
  }
  return false;
}

SjedBlock classify(const Representation& rep, std::vector<std::size_t> indices,
                   const Tolerance& tol) {
  const CMatrix& first = rep.jumps[indices.front()];
  if (numerical_rank(first, tol) == 1) {
    CMatrix gamma = CMatrix::Zero(rep.dim(), rep.dim());
    for (std::size_t k : indices) {
      if (numerical_rank(rep.jumps[k], tol) != 1) {
        throw NumericError("inconsistent SJED: jump " + std::to_string(k + 1) +
                           " is not rank one but shares a block with rank-one jumps");
      }
      gamma.noalias() += rep.jumps[k].adjoint() * rep.jumps[k];
    }
    // Hermitize against rounding.
    gamma = 0.5 * (gamma + gamma.adjoint()).eval();
    const CVector chi = fix_phase(leading_left_singular_vector(first), tol.atol());
    return SjedBlock{std::move(indices), ResetKind{PureState(chi), std::move(gamma)}};
  }
  CMatrix j = fix_phase_row_major(first / first.norm(), tol.atol());
  double sum_sq = 0.0;
  for (std::size_t k : indices) {
    if (!proportionality_coefficient(rep.jumps[k], j, tol)) {
      throw NumericError("inconsistent SJED: jump " + std::to_string(k + 1) +
                         " is not proportional to its block operator");
    }
    sum_sq += rep.jumps[k].squaredNorm();
  }
  return SjedBlock{std::move(indices), NonResetKind{std::sqrt(sum_sq), std::move(j)}};
}

struct PreparedRep {
  const Representation* rep;
  SjedPartition part;
};

void collect_violations(const PreparedRep& prepared, int rep_index, const PureState& psi,
                        const Tolerance& tol, std::vector<WitnessViolation>& out) {
  const Representation& rep = *prepared.rep;
  const std::size_t d = rep.jump_count();
  std::vector<CMatrix> dest(d);
  std::vector<bool> live(d, false);
  for (std::size_t k = 0; k < d; ++k) {
    const double rate = jump_rate(rep, k, psi);
    if (rate <= kWitnessThreshold) {
      out.push_back({WitnessViolation::Kind::ZeroRate, rep_index, k});
      continue;
    }
    live[k] = true;
    dest[k] = jump_destination(rep, k, psi, tol);
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      if (!live[k] || !live[l] || prepared.part.block_of[k] == prepared.part.block_of[l]) {
        continue;
      }
      if (pure_trace_distance(dest[k], dest[l]) <= kWitnessThreshold) {
        out.push_back({WitnessViolation::Kind::EqualDestinations, rep_index, k, l});
      }
    }
  }
}

std::vector<WitnessViolation> violations_prepared(const PreparedRep& a, const PreparedRep& b,
                                                  const PureState& psi, const Tolerance& tol) {
  std::vector<WitnessViolation> out;
  collect_violations(a, 0, psi, tol, out);
  collect_violations(b, 1, psi, tol, out);
  return out;
}

/// Random direction that lifts the given degeneracy at first order.
PureState lifting_direction(const PreparedRep& prepared, const WitnessViolation& v,
                            const Tolerance& tol, std::mt19937_64& rng) {
  const Representation& rep = *prepared.rep;
  for (int tries = 0; tries < 64; ++tries) {
    PureState phi = random_pure_state(rep.dim(), rng);
    if (v.kind == WitnessViolation::Kind::ZeroRate) {
      if (jump_rate(rep, v.jump, phi) > kWitnessThreshold) {
        return phi;
      }
    } else {
      const CMatrix da = jump_destination(rep, v.jump, phi, tol);
      const CMatrix db = jump_destination(rep, v.other_jump, phi, tol);
      if (da.norm() > 0 && db.norm() > 0 && pure_trace_distance(da, db) > kWitnessThreshold) {
        return phi;
      }
    }
  }
  return random_pure_state(rep.dim(), rng);
}

}  // namespace

bool are_jed(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != a.cols() || a.rows() != b.rows() || b.rows() != b.cols()) {
    throw std::invalid_argument("are_jed: operators must be square of equal dimension");
  }
  if (a.norm() <= tol.atol() || b.norm() <= tol.atol()) {
    throw NumericError("are_jed: zero jump operator");
  }
  if (numerical_rank(a, tol) == 1 && numerical_rank(b, tol) == 1) {
    const CVector ua = leading_left_singular_vector(a);
    const CVector ub = leading_left_singular_vector(b);
    return 1.0 - std::abs(ua.dot(ub)) <= tol.rtol();
  }
  return proportionality_coefficient(a, b, tol).has_value();
}

SjedPartition partition(const Representation& rep, const Tolerance& tol) {
  require_valid(rep, tol);
  const std::size_t d = rep.jump_count();
  DisjointSets sets(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t l = k + 1; l < d; ++l) {
      if (sets.find(k) != sets.find(l) && are_jed(rep.jumps[k], rep.jumps[l], tol)) {
        sets.unite(k, l);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> root_to_group(d, d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t root = sets.find(k);
    if (root_to_group[root] == d) {
      root_to_group[root] = groups.size();
      groups.emplace_back();
    }
    groups[root_to_group[root]].push_back(k);
  }
  SjedPartition part;
  part.block_of.assign(d, 0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t k : groups[g]) {
      part.block_of[k] = g;
    }
    part.blocks.push_back(classify(rep, std::move(groups[g]), tol));
  }
  return part;
}

CMatrix composite_action(const Representation& rep, const SjedBlock& block) {
  std::vector<CMatrix> ops;
  ops.reserve(block.indices.size());
  for (std::size_t k : block.indices) {
    if (k >= rep.jump_count()) {
      throw std::out_of_range("composite_action: block index outside representation");
    }
    ops.push_back(rep.jumps[k]);
  }
  return superoperator_matrix(ops);
}

std::vector<CMatrix> minimal_block_representation(const SjedBlock& block, const Tolerance& tol) {
  if (!block.is_reset()) {
    const NonResetKind& nr = block.non_reset();
    return {nr.lambda * nr.j_canonical};
  }
  const ResetKind& r = block.reset();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.gamma);
  const RVector& values = eig.eigenvalues();
  const double cutoff = tol.atol() * r.gamma.trace().real();

  struct Pair {
    double value;
    CVector vec;
  };
  std::vector<Pair> kept;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff) {
      kept.push_back({values(i), fix_phase(eig.eigenvectors().col(i), tol.atol())});
    }
  }
  std::sort(kept.begin(), kept.end(), [&](const Pair& x, const Pair& y) {
    if (std::abs(x.value - y.value) > cutoff) {
      return x.value > y.value;
    }
    return lex_less(x.vec, y.vec);
  });
  std::vector<CMatrix> ops;
  ops.reserve(kept.size());
  for (const Pair& p : kept) {
    ops.push_back(std::sqrt(p.value) * r.chi.amplitudes() * p.vec.adjoint());
  }
  return ops;
}

Representation minimize_representation(const Representation& rep, const Tolerance& tol) {
  const SjedPartition part = partition(rep, tol);
  Representation out;
  out.label = rep.label.empty() ? "minimal" : rep.label + "-minimal";
  out.hamiltonian = rep.hamiltonian;
  for (const SjedBlock& block : part.blocks) {
    for (CMatrix& op : minimal_block_representation(block, tol)) {
      out.jumps.push_back(std::move(op));
    }
  }
  // Blocks keep their order, so the composite actions must agree pairwise.
  const SjedPartition min_part = partition(out, tol);
  if (min_part.block_count() != part.block_count()) {
    throw std::logic_error("minimize_representation: block count changed");
  }
  for (std::size_t a = 0; a < part.block_count(); ++a) {
    if (!approx_equal(composite_action(rep, part.blocks[a]),
                      composite_action(out, min_part.blocks[a]), tol)) {
      throw std::logic_error("minimize_representation: composite action not preserved");
    }
  }
  return out;
}

std::vector<WitnessViolation> witness_violations(const Representation& a,
                                                 const Representation& b,
                                                 const PureState& psi, const Tolerance& tol) {
  const PreparedRep pa{&a, partition(a, tol)};
  const PreparedRep pb{&b, partition(b, tol)};
  return violations_prepared(pa, pb, psi, tol);
}

PureState find_witness_state(const Representation& a, const Representation& b,
                             std::uint64_t seed, const Tolerance& tol,
                             std::optional<PureState> start) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("find_witness_state: dimension mismatch");
  }
  const PreparedRep pa{&a, partition(a, tol)};
  const PreparedRep pb{&b, partition(b, tol)};
  std::mt19937_64 rng(seed);
  PureState psi = start ? *start : random_pure_state(a.dim(), rng);
  if (psi.dim() != a.dim()) {
    throw std::invalid_argument("find_witness_state: start state has wrong dimension");
  }

  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const auto current = violations_prepared(pa, pb, psi, tol);
    if (current.empty()) {
      return psi;
    }
    const WitnessViolation& v = current.front();
    const PureState phi = lifting_direction(v.rep_index == 0 ? pa : pb, v, tol, rng);
    bool improved = false;
    for (double amp = 1.0; amp > 1e-6; amp *= 0.5) {
      PureState candidate(psi.amplitudes() + amp * phi.amplitudes());
      if (violations_prepared(pa, pb, candidate, tol).size() < current.size()) {
        psi = std::move(candidate);
        improved = true;
        break;
      }
    }
    if (!improved) {
      psi = random_pure_state(a.dim(), rng);
    }
  }
  throw WitnessNotFound("no witness found after 1000 attempts");
}

}  // namespace uqd
