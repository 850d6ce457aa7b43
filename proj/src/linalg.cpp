#include "uqd/linalg.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace uqd {

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) {
    throw NumericError("pure state must have dimension >= 1");
  }
  if (!amps_.allFinite()) {
    throw NumericError("pure state has non-finite amplitudes");
  }
  const double n = amps_.norm();
  if (!(n > 1e-300)) {
    throw NumericError("cannot normalise a zero vector");
  }
  amps_ /= n;
}

PureState PureState::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw std::out_of_range("basis state index out of range");
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return PureState(std::move(v));
}

double frobenius_norm(const CMatrix& m) { return m.norm(); }

bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  const double scale = std::max(a.norm(), b.norm());
  return (a - b).norm() <= tol.bound(scale);
}

bool all_finite(const CMatrix& m) { return m.allFinite(); }

int numerical_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<CMatrix> svd(m);
  const RVector& s = svd.singularValues();
  if (s.size() == 0) {
    return 0;
  }
  const double cutoff = tol.bound(s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) {
      ++rank;
    }
  }
  return rank;
}

std::optional<Complex> proportionality_coefficient(const CMatrix& a, const CMatrix& b,
                                                   const Tolerance& tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("proportionality_coefficient: shape mismatch");
  }
  const double bb = b.squaredNorm();
  if (!(bb > 0.0)) {
    throw NumericError("degenerate reference operator");
  }
  // <B, A>_F = Tr(B^dag A)
  const Complex lambda = b.cwiseProduct(a.conjugate()).sum();
  const Complex coef = std::conj(lambda) / bb;
  if ((a - coef * b).norm() <= tol.bound(a.norm())) {
    return coef;
  }
  return std::nullopt;
}

CVector vectorize(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvectorize(const CVector& v, int rows) {
  if (rows <= 0 || v.size() % rows != 0) {
    throw std::invalid_argument("unvectorize: length not divisible by rows");
  }
  return Eigen::Map<const CMatrix>(v.data(), rows, v.size() / rows);
}

CMatrix superoperator_matrix(std::span<const CMatrix> kraus) {
  if (kraus.empty()) {
    throw std::invalid_argument("superoperator_matrix: empty Kraus list");
  }
  const Eigen::Index d = kraus.front().rows();
  CMatrix out = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("superoperator_matrix: operators must be square of equal dimension");
    }
    out += Eigen::kroneckerProduct(k.conjugate(), k).eval();
  }
  return out;
}

std::optional<Complex> identity_shift(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("identity_shift: matrix must be square");
  }
  const Complex z = m.trace() / static_cast<double>(m.rows());
  const CMatrix residual = m - z * CMatrix::Identity(m.rows(), m.cols());
  if (residual.norm() <= tol.bound(m.norm())) {
    return z;
  }
  return std::nullopt;
}

CMatrix matrix_exponential(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("matrix_exponential: matrix must be square");
  }
  if (!m.allFinite()) {
    throw NumericError("matrix_exponential: non-finite input");
  }
  return m.exp();
}

PureState random_pure_state(int dim, std::mt19937_64& rng) {
  if (dim < 1) {
    throw std::invalid_argument("random_pure_state: dim must be >= 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return PureState(std::move(v));
}

PureState random_pure_state(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_pure_state(dim, rng);
}

CMatrix random_isometry(int rows, int cols, std::mt19937_64& rng) {
  if (cols < 1 || rows < cols) {
    throw std::invalid_argument("random_isometry: need rows >= cols >= 1");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  // Fix the column phases with R's diagonal so the distribution is Haar.
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < cols; ++j) {
    const Complex rjj = r(j, j);
    if (std::abs(rjj) > 0.0) {
      q.col(j) *= rjj / std::abs(rjj);
    }
  }
  return q;
}

CVector fix_phase(const CVector& v, double threshold) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > threshold) {
      return v * (std::abs(v(i)) / v(i));
    }
  }
  return v;
}

CMatrix fix_phase_row_major(const CMatrix& m, double threshold) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > threshold) {
        return m * (std::abs(m(i, j)) / m(i, j));
      }
    }
  }
  return m;
}

double pure_trace_distance(const CMatrix& a, const CMatrix& b) {
  // a - b has eigenvalues +-x, so x = ||a - b||_F / sqrt(2). Going through the
  // overlap instead would floor the result at sqrt(eps).
  return (a - b).norm() / std::sqrt(2.0);
}

double wrap_phase(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(angle, two_pi);
  if (w <= -std::numbers::pi) {
    w += two_pi;
  } else if (w > std::numbers::pi) {
    w -= two_pi;
  }
  return w;
}

}  // namespace uqd
