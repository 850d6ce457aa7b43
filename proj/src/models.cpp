#include "uqd/models.hpp"

#include <cmath>
#include <numbers>

namespace uqd::models {

namespace {

CMatrix ket_bra(int dim, int row, int col) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(row, col) = 1.0;
  return m;
}

/// |ket><bra| with ket and bra given as real vectors.
CMatrix dyad(const Eigen::Vector3d& ket, const Eigen::Vector3d& bra) {
  return (ket * bra.transpose()).cast<Complex>();
}

}  // namespace

CMatrix dephasing_operator() {
  return (ket_bra(3, 2, 2) - ket_bra(3, 0, 0)) / std::sqrt(2.0);
}

CMatrix drive_hamiltonian(double omega) {
  CMatrix h = CMatrix::Zero(3, 3);
  h(0, 1) = h(1, 0) = omega;
  h(1, 2) = h(2, 1) = omega;
  return h;
}

Representation qutrit_full(const QutritParams& p) {
  const double sg = std::sqrt(p.gamma);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const CMatrix j = dephasing_operator();
  Representation rep;
  rep.label = "qutrit-full";
  rep.hamiltonian = drive_hamiltonian(p.omega);
  rep.jumps.push_back(sg * ket_bra(3, 0, 1));
  rep.jumps.push_back(sg * ket_bra(3, 0, 2));
  rep.jumps.push_back(sg * dyad({1, 0, 0}, {0, c, s}));
  rep.jumps.push_back(p.lambda * std::cos(p.vartheta) * j);
  rep.jumps.push_back(std::polar(1.0, p.phi) * p.lambda * std::sin(p.vartheta) * j);
  return rep;
}

Representation qutrit_minimal(const QutritParams& p) {
  const double sg = std::sqrt(p.gamma);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Representation rep;
  rep.label = "qutrit-minimal";
  rep.hamiltonian = drive_hamiltonian(p.omega);
  rep.jumps.push_back(sg * dyad({1, 0, 0}, {0, -s, c}));
  rep.jumps.push_back(std::sqrt(2.0) * sg * dyad({1, 0, 0}, {0, c, s}));
  rep.jumps.push_back(p.lambda * dephasing_operator());
  return rep;
}

CMatrix qutrit_isometry(const QutritParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const double r2 = 1.0 / std::sqrt(2.0);
  CMatrix v = CMatrix::Zero(5, 3);
  v(0, 0) = -s;
  v(0, 1) = r2 * c;
  v(1, 0) = c;
  v(1, 1) = r2 * s;
  v(2, 1) = r2;
  v(3, 2) = std::cos(p.vartheta);
  v(4, 2) = std::polar(1.0, p.phi) * std::sin(p.vartheta);
  return v;
}

CMatrix qutrit_gamma(const QutritParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  CMatrix g = CMatrix::Zero(3, 3);
  g(1, 1) = 1.0 + c * c;
  g(2, 2) = 1.0 + s * s;
  g(1, 2) = g(2, 1) = c * s;
  return p.gamma * g;
}

Representation two_reset(const TwoResetParams& p) {
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  const Eigen::Vector3d chi1(c, 0, s);
  const Eigen::Vector3d chi2(-s, 0, c);
  const Eigen::Vector3d e1(0, 1, 0);
  const Eigen::Vector3d e2(0, 0, 1);
  Representation rep;
  rep.label = "two-reset";
  rep.hamiltonian = drive_hamiltonian(p.omega);
  rep.jumps.push_back(std::sqrt(p.gamma1) * dyad(chi1, e1));
  rep.jumps.push_back(std::sqrt(p.gamma2) * dyad(chi1, e1));
  rep.jumps.push_back(std::sqrt(p.gamma3) * dyad(chi1, e2));
  rep.jumps.push_back(std::sqrt(p.gamma1 + p.gamma2) * dyad(chi2, e1));
  rep.jumps.push_back(std::sqrt(p.gamma3) * dyad(chi2, e2));
  return rep;
}

Representation two_reset_tilde(const TwoResetParams& p) {
  if (std::abs(p.gamma1_tilde + p.gamma2_tilde - p.gamma1 - p.gamma2) >
      1e-12 * std::max(1.0, p.gamma1 + p.gamma2)) {
    throw std::invalid_argument("two_reset_tilde: gamma1~ + gamma2~ must equal gamma1 + gamma2");
  }
  Representation rep;
  rep.label = "two-reset-tilde";
  rep.hamiltonian = drive_hamiltonian(p.omega);
  rep.jumps.push_back(std::sqrt(p.gamma1_tilde) * ket_bra(3, 0, 1));
  rep.jumps.push_back(std::sqrt(p.gamma2_tilde) * ket_bra(3, 0, 1));
  rep.jumps.push_back(std::sqrt(p.gamma3) * ket_bra(3, 0, 2));
  rep.jumps.push_back(std::sqrt(p.gamma1_tilde + p.gamma2_tilde) * ket_bra(3, 2, 1));
  rep.jumps.push_back(std::sqrt(p.gamma3) * ket_bra(3, 2, 2));
  return rep;
}

Representation single_decay(double gamma) {
  Representation rep;
  rep.label = "single-decay";
  rep.hamiltonian = CMatrix::Zero(2, 2);
  rep.jumps.push_back(std::sqrt(gamma) * ket_bra(2, 0, 1));
  return rep;
}

}  // namespace uqd::models
