#pragma once

// Reference qutrit models with basis |0>, |1>, |2>.
//
// QutritModel: three reset jumps into |0> plus a dephasing pair proportional
// to J = (|2><2| - |0><0|)/sqrt(2),
//   J1 = sqrt(g)|0><1|, J2 = sqrt(g)|0><2|,
//   J3 = sqrt(g)|0>(cos(theta)<1| + sin(theta)<2|),
//   J4 = lambda cos(vartheta) J, J5 = e^{i phi} lambda sin(vartheta) J.
// Its minimal counterpart has
//   J1' = sqrt(g)|0>(-sin(theta)<1| + cos(theta)<2|),
//   J2' = sqrt(2g)|0>(cos(theta)<1| + sin(theta)<2|),
//   J3' = lambda J.
//
// TwoResetModel: two reset families with destinations chi1, chi2 that are
// rotated by theta in the |0>,|2> plane, and a "tilde" variant whose
// destinations are |0> and |2>.

#include <numbers>

#include "uqd/representation.hpp"

namespace uqd::models {

struct QutritParams {
  double theta = std::numbers::pi / 6.0;
  double gamma = 1.0;
  double vartheta = std::numbers::pi / 3.0;
  double phi = 0.0;
  double lambda = 2.0;
  /// Coherent drive Omega (|0><1| + |1><2| + h.c.); zero leaves H = 0.
  double omega = 0.0;
};

struct TwoResetParams {
  double theta = 0.0;
  double gamma1 = 0.3;
  double gamma2 = 0.7;
  double gamma3 = 0.5;
  /// Rates of the tilde variant; must satisfy gamma1_tilde + gamma2_tilde = gamma1 + gamma2.
  double gamma1_tilde = 0.6;
  double gamma2_tilde = 0.4;
  double omega = 0.0;
};

/// (|2><2| - |0><0|)/sqrt(2)
CMatrix dephasing_operator();

CMatrix drive_hamiltonian(double omega);

Representation qutrit_full(const QutritParams& p = {});
Representation qutrit_minimal(const QutritParams& p = {});

/// 5x3 block isometry mapping qutrit_minimal onto qutrit_full.
CMatrix qutrit_isometry(const QutritParams& p = {});

/// Weight matrix Gamma of the reset family of qutrit_full.
CMatrix qutrit_gamma(const QutritParams& p = {});

Representation two_reset(const TwoResetParams& p = {});
Representation two_reset_tilde(const TwoResetParams& p = {});

/// sqrt(gamma)|0><1| on a qubit, H = 0.
Representation single_decay(double gamma = 1.0);

}  // namespace uqd::models
