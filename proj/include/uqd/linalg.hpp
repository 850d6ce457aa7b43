#pragma once

// Dense complex kernel shared by every other module.
//
// Vectorization convention: column stacking, vec(A X B) = (B^T (x) A) vec(X).
// Under this convention the map X -> J X J^dag is the matrix conj(J) (x) J.

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

namespace uqd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Absolute and relative tolerances used by every comparison in the library.
class Tolerance {
 public:
  Tolerance() = default;
  Tolerance(double atol, double rtol) : atol_(atol), rtol_(rtol) {
    if (!(atol >= 0.0) || !(rtol >= 0.0)) {
      throw std::invalid_argument("tolerances must be non-negative");
    }
  }

  double atol() const { return atol_; }
  double rtol() const { return rtol_; }

  /// max(atol, rtol * scale)
  double bound(double scale) const { return std::max(atol_, rtol_ * scale); }

 private:
  double atol_ = 1e-10;
  double rtol_ = 1e-10;
};

/// Unit vector in C^d. The constructor normalises; construction from a
/// (numerically) zero vector is an error.
class PureState {
 public:
  explicit PureState(CVector amplitudes);

  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  const CVector& amplitudes() const { return amps_; }
  CMatrix density() const { return amps_ * amps_.adjoint(); }

 private:
  CVector amps_;
};

/// Thrown when an input matrix or vector violates a numeric precondition.
class NumericError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

double frobenius_norm(const CMatrix& m);

/// ||a - b||_F <= max(atol, rtol * max(||a||_F, ||b||_F)); shapes must agree.
bool approx_equal(const CMatrix& a, const CMatrix& b, const Tolerance& tol);

bool all_finite(const CMatrix& m);

int numerical_rank(const CMatrix& m, const Tolerance& tol = {});

/// lambda with A ~= lambda * B, or nullopt. Throws NumericError when B == 0.
std::optional<Complex> proportionality_coefficient(const CMatrix& a, const CMatrix& b,
                                                   const Tolerance& tol = {});

CVector vectorize(const CMatrix& m);
CMatrix unvectorize(const CVector& v, int rows);

/// Matrix of the map X -> sum_k K_k X K_k^dag acting on vec(X).
CMatrix superoperator_matrix(std::span<const CMatrix> kraus);

/// z = Tr(M)/d when M ~= z * 1.
std::optional<Complex> identity_shift(const CMatrix& m, const Tolerance& tol = {});

CMatrix matrix_exponential(const CMatrix& m);

/// Haar-random pure state; deterministic per seed.
PureState random_pure_state(int dim, std::uint64_t seed);
PureState random_pure_state(int dim, std::mt19937_64& rng);

/// Random isometry (rows >= cols) with V^dag V = 1, from QR of a Ginibre matrix.
CMatrix random_isometry(int rows, int cols, std::mt19937_64& rng);

/// Multiplies by a global phase so the first entry (column-major for vectors,
/// row-major for matrices) whose modulus exceeds `threshold` is real positive.
CVector fix_phase(const CVector& v, double threshold = 1e-12);
CMatrix fix_phase_row_major(const CMatrix& m, double threshold = 1e-12);

/// Trace distance between two pure density matrices.
double pure_trace_distance(const CMatrix& a, const CMatrix& b);

/// Wraps an angle to (-pi, pi].
double wrap_phase(double angle);

}  // namespace uqd
