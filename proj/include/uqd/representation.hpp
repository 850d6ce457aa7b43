#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "uqd/linalg.hpp"

namespace uqd {

/// A Hamiltonian together with an ordered list of jump operators. Jump
/// indices are 0-based in the API and 1-based in every external format.
struct Representation {
  std::string label;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;

  int dim() const { return static_cast<int>(hamiltonian.rows()); }
  std::size_t jump_count() const { return jumps.size(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

class ValidationError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ValidationReport validate(const Representation& rep, const Tolerance& tol = {});

/// Throws ValidationError carrying every violation.
void require_valid(const Representation& rep, const Tolerance& tol = {});

/// Vectorized generator of the master equation (column stacking).
CMatrix liouvillian_matrix(const Representation& rep);

/// Applies the master equation generator to a density matrix directly,
/// without vectorization.
CMatrix apply_liouvillian(const Representation& rep, const CMatrix& rho);

/// H - (i/2) sum_k J_k^dag J_k
CMatrix effective_hamiltonian(const Representation& rep);

double jump_rate(const Representation& rep, std::size_t k, const PureState& psi);

/// Normalised J_k psi J_k^dag, or the zero matrix when the rate is <= atol.
CMatrix jump_destination(const Representation& rep, std::size_t k, const PureState& psi,
                         const Tolerance& tol = {});

/// Deterministic part of the conditional-state evolution at a pure density
/// matrix psi.
CMatrix drift(const Representation& rep, const CMatrix& psi);

/// Copy with H replaced by H + r * 1.
Representation shift_hamiltonian(const Representation& rep, double r);

std::string serialize(const Representation& rep, int indent = 2);
Representation parse_representation(std::string_view text);

Representation load_representation(const std::filesystem::path& path);
void save_representation(const Representation& rep, const std::filesystem::path& path);

}  // namespace uqd
