#include "uqd/json_io.hpp"

#include <cmath>

#include "uqd/representation.hpp"

namespace uqd::json_io {

json encode(Complex z) { return json::array({z.real(), z.imag()}); }

json encode(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back(encode(m(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

json encode(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(encode(v(i)));
  }
  return out;
}

json encode(const PureState& psi) { return encode(psi.amplitudes()); }

Complex decode_complex(const json& j, const std::string& where) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError(where + ": complex scalar must be [re, im]");
  }
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw ParseError(where + ": non-finite entry");
  }
  return z;
}

CMatrix decode_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(where + ": matrix must be a non-empty array of rows");
  }
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty()) {
    throw ParseError(where + "[0]: row must be a non-empty array");
  }
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_where = where + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(row_where + ": expected " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = decode_complex(j[r][c], row_where + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

CVector decode_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(where + ": vector must be a non-empty array");
  }
  CVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(i) = decode_complex(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

json one_based(const std::vector<std::size_t>& indices) {
  json out = json::array();
  for (std::size_t i : indices) {
    out.push_back(i + 1);
  }
  return out;
}

}  // namespace uqd::json_io
