#pragma once

// Independent reference computations. Nothing here calls into the library's
// own implementation of the quantity being checked.

#include <cmath>
#include <vector>

#include "uqd/representation.hpp"

namespace oracle {

using uqd::CMatrix;
using uqd::Complex;

/// sum_k K rho K^dag evaluated directly.
inline CMatrix apply_kraus(const std::vector<CMatrix>& kraus, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const CMatrix& k : kraus) {
    out += k * rho * k.adjoint();
  }
  return out;
}

/// Lindblad generator evaluated directly on rho.
inline CMatrix lindblad(const CMatrix& h, const std::vector<CMatrix>& jumps, const CMatrix& rho) {
  const Complex i(0, 1);
  CMatrix out = -i * (h * rho - rho * h);
  for (const CMatrix& j : jumps) {
    out += j * rho * j.adjoint() - 0.5 * (j.adjoint() * j * rho + rho * j.adjoint() * j);
  }
  return out;
}

/// Truncated Taylor series of exp(m).
inline CMatrix taylor_exp(const CMatrix& m, int order = 20) {
  CMatrix term = CMatrix::Identity(m.rows(), m.cols());
  CMatrix sum = term;
  for (int n = 1; n <= order; ++n) {
    term = (term * m / static_cast<double>(n)).eval();
    sum += term;
  }
  return sum;
}

/// Largest entrywise modulus.
inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

/// Integrates d rho/dt = L(rho) with classical RK4.
inline CMatrix rk4_evolve(const CMatrix& h, const std::vector<CMatrix>& jumps, CMatrix rho,
                          double t, int steps) {
  const double dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    const CMatrix k1 = lindblad(h, jumps, rho);
    const CMatrix k2 = lindblad(h, jumps, rho + 0.5 * dt * k1);
    const CMatrix k3 = lindblad(h, jumps, rho + 0.5 * dt * k2);
    const CMatrix k4 = lindblad(h, jumps, rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

/// Critical one-sample KS distance at level alpha for large n.
inline double ks_critical(double alpha, std::size_t n) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

}  // namespace oracle
