#include "generators.hpp"

#include <algorithm>
#include <numeric>

namespace uqd::testing {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

}  // namespace

CMatrix random_complex(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = Complex(normal(rng), normal(rng));
    }
  }
  return m;
}

CMatrix random_hermitian(int dim, std::mt19937_64& rng, double scale) {
  const CMatrix g = random_complex(dim, dim, rng);
  return 0.5 * scale * (g + g.adjoint());
}

Complex random_phase(std::mt19937_64& rng) {
  return std::polar(1.0, uniform(rng, -3.14159, 3.14159));
}

Representation random_representation(int dim, std::mt19937_64& rng) {
  Representation rep;
  rep.label = "random";
  rep.hamiltonian = random_hermitian(dim, rng);
  const int blocks = uniform_int(rng, 1, 3);
  for (int b = 0; b < blocks; ++b) {
    if (uniform_int(rng, 0, 1) == 0) {
      const CVector chi = random_pure_state(dim, rng).amplitudes();
      const int members = uniform_int(rng, 1, 3);
      for (int m = 0; m < members; ++m) {
        const CVector xi = random_pure_state(dim, rng).amplitudes();
        rep.jumps.push_back(std::sqrt(uniform(rng, 0.2, 1.5)) * chi * xi.adjoint());
      }
    } else {
      CMatrix j = random_complex(dim, dim, rng);
      j /= j.norm();
      const int members = uniform_int(rng, 1, 2);
      for (int m = 0; m < members; ++m) {
        rep.jumps.push_back(uniform(rng, 0.3, 1.2) * random_phase(rng) * j);
      }
    }
  }
  return rep;
}

std::vector<std::size_t> random_out_sizes(const Representation& rep_min, std::mt19937_64& rng) {
  const SjedPartition part = partition(rep_min);
  std::vector<std::size_t> sizes;
  for (const SjedBlock& block : part.blocks) {
    sizes.push_back(block.indices.size() + static_cast<std::size_t>(uniform_int(rng, 0, 2)));
  }
  return sizes;
}

BlockIsometry random_block_isometry(const Representation& rep_min,
                                    const std::vector<std::size_t>& out_sizes,
                                    std::mt19937_64& rng) {
  const SjedPartition part = partition(rep_min);
  if (out_sizes.size() != part.block_count()) {
    throw std::invalid_argument("one output size per source block required");
  }
  const std::vector<std::size_t> order = random_permutation(part.block_count(), rng);
  const std::size_t rows = std::accumulate(out_sizes.begin(), out_sizes.end(), std::size_t{0});
  BlockIsometry iso;
  iso.matrix = CMatrix::Zero(static_cast<Eigen::Index>(rows),
                             static_cast<Eigen::Index>(rep_min.jump_count()));
  std::size_t row = 0;
  for (std::size_t src : order) {
    const auto& cols = part.blocks[src].indices;
    const CMatrix sub = random_isometry(static_cast<int>(out_sizes[src]),
                                        static_cast<int>(cols.size()), rng);
    std::vector<std::size_t> block_rows;
    for (std::size_t i = 0; i < out_sizes[src]; ++i, ++row) {
      block_rows.push_back(row);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        iso.matrix(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(cols[c])) =
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
      }
    }
    iso.row_blocks.push_back(std::move(block_rows));
    iso.block_map.push_back(src);
  }
  return iso;
}

Representation qme_gauge(const Representation& rep, const CMatrix& v,
                         const std::vector<Complex>& c, double r) {
  const int dim = rep.dim();
  const CMatrix id = CMatrix::Identity(dim, dim);
  Representation out;
  out.label = rep.label + "-qme-gauged";
  out.hamiltonian = rep.hamiltonian + r * id;
  for (Eigen::Index j = 0; j < v.rows(); ++j) {
    CMatrix k = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < v.cols(); ++i) {
      k += v(j, i) * rep.jumps[static_cast<std::size_t>(i)];
    }
    const Complex cj = c.at(static_cast<std::size_t>(j));
    // -i/2 (c* K - c K^dag) compensates the identity shift in the commutator.
    out.hamiltonian += Complex(0, -0.5) * (std::conj(cj) * k - cj * k.adjoint());
    out.jumps.push_back(k + cj * id);
  }
  return out;
}

Representation mix_jumps(const Representation& rep, std::size_t i, std::size_t j,
                         const CMatrix& u) {
  Representation out = rep;
  out.label = rep.label + "-mixed";
  out.jumps[i] = u(0, 0) * rep.jumps[i] + u(0, 1) * rep.jumps[j];
  out.jumps[j] = u(1, 0) * rep.jumps[i] + u(1, 1) * rep.jumps[j];
  return out;
}

CMatrix random_unitary2(std::mt19937_64& rng) {
  return random_isometry(2, 2, rng);
}

Representation permute_with_phases(const Representation& rep, const std::vector<std::size_t>& perm,
                                   const std::vector<double>& phases) {
  Representation out = rep;
  out.label = rep.label + "-permuted";
  for (std::size_t k = 0; k < perm.size(); ++k) {
    out.jumps[k] = std::polar(1.0, phases[k]) * rep.jumps[perm[k]];
  }
  return out;
}

RandomPair random_pair(std::mt19937_64& rng) {
  const int dim = uniform_int(rng, 2, 4);
  Representation a = random_representation(dim, rng);
  const double r = uniform(rng, -1.0, 1.0);
  switch (uniform_int(rng, 0, 5)) {
    case 0: {
      std::vector<double> phases;
      for (std::size_t k = 0; k < a.jump_count(); ++k) phases.push_back(uniform(rng, -3.0, 3.0));
      Representation b = shift_hamiltonian(
          permute_with_phases(a, random_permutation(a.jump_count(), rng), phases), r);
      return {"labelled", std::move(a), std::move(b)};
    }
    case 1: {
      const Representation rep_min = minimize_representation(a);
      const BlockIsometry iso =
          random_block_isometry(rep_min, random_out_sizes(rep_min, rng), rng);
      Representation b = apply_gauge(rep_min, iso, r);
      return {"block-gauge", std::move(a), std::move(b)};
    }
    case 2: {
      const auto d = static_cast<int>(a.jump_count());
      const CMatrix v = random_isometry(d + 1, d, rng);
      std::vector<Complex> c;
      for (int j = 0; j <= d; ++j) c.push_back(Complex(uniform(rng, -1, 1), uniform(rng, -1, 1)));
      Representation b = qme_gauge(a, v, c, r);
      return {"qme-gauge", std::move(a), std::move(b)};
    }
    case 3: {
      const Representation rep_min = minimize_representation(a);
      const SjedPartition part = partition(rep_min);
      if (part.block_count() < 2) {
        const auto d = static_cast<int>(a.jump_count());
        const CMatrix v = random_isometry(d, d, rng);
        std::vector<Complex> c(static_cast<std::size_t>(d), Complex(0.0, 0.0));
        Representation b = qme_gauge(a, v, c, r);
        return {"qme-unitary", std::move(a), std::move(b)};
      }
      Representation b = mix_jumps(rep_min, part.blocks[0].indices.front(),
                                   part.blocks[1].indices.front(), random_unitary2(rng));
      return {"cross-mix", std::move(a), std::move(b)};
    }
    case 4: {
      Representation b = shift_hamiltonian(a, r);
      b.jumps.front() *= 1.1;
      return {"perturbed", std::move(a), std::move(b)};
    }
    default: {
      Representation b = random_representation(dim, rng);
      return {"unrelated", std::move(a), std::move(b)};
    }
  }
}

}  // namespace uqd::testing
