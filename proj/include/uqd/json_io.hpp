#pragma once

// JSON encoding of the numeric types. Complex scalars are [re, im] pairs,
// matrices are row-major arrays of rows.

#include <json.hpp>

#include "uqd/linalg.hpp"

namespace uqd::json_io {

using nlohmann::json;

json encode(Complex z);
json encode(const CMatrix& m);
json encode(const CVector& v);
json encode(const PureState& psi);

/// `where` is prefixed to error messages, e.g. "jumps[2]".
Complex decode_complex(const json& j, const std::string& where);
CMatrix decode_matrix(const json& j, const std::string& where);
CVector decode_vector(const json& j, const std::string& where);

/// 1-based copy of a 0-based index list.
json one_based(const std::vector<std::size_t>& indices);

}  // namespace uqd::json_io
