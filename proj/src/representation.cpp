#include "uqd/representation.hpp"

#include <cerrno>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unsupported/Eigen/KroneckerProduct>

#include "uqd/json_io.hpp"

namespace uqd {

namespace {

constexpr double kHermitianTol = 1e-12;

void check_index(const Representation& rep, std::size_t k) {
  if (k >= rep.jumps.size()) {
    throw std::out_of_range("jump index " + std::to_string(k + 1) + " out of range (1.." +
                            std::to_string(rep.jumps.size()) + ")");
  }
}

CMatrix jump_dissipator(const Representation& rep) {
  CMatrix sum = CMatrix::Zero(rep.dim(), rep.dim());
  for (const CMatrix& j : rep.jumps) {
    sum.noalias() += j.adjoint() * j;
  }
  return sum;
}

}  // namespace

ValidationReport validate(const Representation& rep, const Tolerance& tol) {
  ValidationReport report;
  const CMatrix& h = rep.hamiltonian;
  if (h.rows() == 0 || h.rows() != h.cols()) {
    report.violations.push_back("Hamiltonian must be a non-empty square matrix");
    return report;
  }
  if (!h.allFinite()) {
    report.violations.push_back("Hamiltonian has non-finite entries");
  } else if ((h - h.adjoint()).norm() > kHermitianTol * std::max(1.0, h.norm())) {
    report.violations.push_back("Hamiltonian not Hermitian");
  }
  if (rep.jumps.empty()) {
    report.violations.push_back("representation has no jump operators");
  }
  for (std::size_t k = 0; k < rep.jumps.size(); ++k) {
    const CMatrix& j = rep.jumps[k];
    const std::string idx = std::to_string(k + 1);
    if (j.rows() != h.rows() || j.cols() != h.cols()) {
      report.violations.push_back("dimension mismatch at jump operator " + idx);
      continue;
    }
    if (!j.allFinite()) {
      report.violations.push_back("non-finite jump operator at index " + idx);
    } else if (j.norm() <= tol.atol()) {
      report.violations.push_back("zero jump operator at index " + idx);
    }
  }
  return report;
}

void require_valid(const Representation& rep, const Tolerance& tol) {
  const ValidationReport report = validate(rep, tol);
  if (!report.ok()) {
    std::string msg = "invalid representation";
    if (!rep.label.empty()) {
      msg += " '" + rep.label + "'";
    }
    for (const auto& v : report.violations) {
      msg += "; " + v;
    }
    throw ValidationError(msg);
  }
}

CMatrix liouvillian_matrix(const Representation& rep) {
  require_valid(rep);
  const int d = rep.dim();
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix heff = effective_hamiltonian(rep);
  // -i H_eff rho + i rho H_eff^dag + sum_k J_k rho J_k^dag
  CMatrix l = Eigen::kroneckerProduct(id, (Complex(0, -1) * heff).eval()).eval();
  l += Eigen::kroneckerProduct((Complex(0, 1) * heff.conjugate()).eval(), id).eval();
  l += superoperator_matrix(rep.jumps);
  return l;
}

CMatrix apply_liouvillian(const Representation& rep, const CMatrix& rho) {
  const Complex i(0, 1);
  CMatrix out = -i * (rep.hamiltonian * rho - rho * rep.hamiltonian);
  for (const CMatrix& j : rep.jumps) {
    const CMatrix jdj = j.adjoint() * j;
    out += j * rho * j.adjoint() - 0.5 * (jdj * rho + rho * jdj);
  }
  return out;
}

CMatrix effective_hamiltonian(const Representation& rep) {
  return rep.hamiltonian - Complex(0, 0.5) * jump_dissipator(rep);
}

double jump_rate(const Representation& rep, std::size_t k, const PureState& psi) {
  check_index(rep, k);
  return (rep.jumps[k] * psi.amplitudes()).squaredNorm();
}

CMatrix jump_destination(const Representation& rep, std::size_t k, const PureState& psi,
                         const Tolerance& tol) {
  check_index(rep, k);
  const CVector v = rep.jumps[k] * psi.amplitudes();
  const double rate = v.squaredNorm();
  if (rate <= tol.atol()) {
    return CMatrix::Zero(rep.dim(), rep.dim());
  }
  return v * v.adjoint() / rate;
}

CMatrix drift(const Representation& rep, const CMatrix& psi) {
  const CMatrix heff = effective_hamiltonian(rep);
  const Complex i(0, 1);
  const CMatrix b = -i * heff * psi + i * psi * heff.adjoint();
  return b - psi * b.trace();
}

Representation shift_hamiltonian(const Representation& rep, double r) {
  Representation out = rep;
  out.hamiltonian += r * CMatrix::Identity(rep.dim(), rep.dim());
  return out;
}

std::string serialize(const Representation& rep, int indent) {
  using json_io::json;
  json doc;
  doc["label"] = rep.label;
  doc["dim"] = rep.dim();
  doc["hamiltonian"] = json_io::encode(rep.hamiltonian);
  json jumps = json::array();
  for (const CMatrix& j : rep.jumps) {
    jumps.push_back(json_io::encode(j));
  }
  doc["jumps"] = std::move(jumps);
  return doc.dump(indent);
}

Representation parse_representation(std::string_view text) {
  using json_io::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("representation document must be a JSON object");
  }
  for (const char* field : {"dim", "hamiltonian", "jumps"}) {
    if (!doc.contains(field)) {
      throw ParseError(std::string("missing field ") + field);
    }
  }
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw ParseError("field dim: must be a positive integer");
  }
  const auto dim = static_cast<Eigen::Index>(doc["dim"].get<long long>());

  Representation rep;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) {
      throw ParseError("field label: must be a string");
    }
    rep.label = doc["label"].get<std::string>();
  }
  if (doc["hamiltonian"].is_null()) {
    rep.hamiltonian = CMatrix::Zero(dim, dim);
  } else {
    rep.hamiltonian = json_io::decode_matrix(doc["hamiltonian"], "hamiltonian");
  }
  if (rep.hamiltonian.rows() != dim || rep.hamiltonian.cols() != dim) {
    throw ParseError("field hamiltonian: expected " + std::to_string(dim) + "x" +
                     std::to_string(dim) + " matrix");
  }
  if (!doc["jumps"].is_array()) {
    throw ParseError("field jumps: must be an array of matrices");
  }
  for (std::size_t k = 0; k < doc["jumps"].size(); ++k) {
    const std::string where = "jumps[" + std::to_string(k) + "]";
    CMatrix j = json_io::decode_matrix(doc["jumps"][k], where);
    if (j.rows() != dim || j.cols() != dim) {
      throw ParseError(where + ": expected " + std::to_string(dim) + "x" + std::to_string(dim) +
                       " matrix");
    }
    rep.jumps.push_back(std::move(j));
  }
  return rep;
}

Representation load_representation(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_representation(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_representation(const Representation& rep, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::system_error(errno, std::generic_category(), "cannot write " + path.string());
  }
  out << serialize(rep) << '\n';
}

}  // namespace uqd
