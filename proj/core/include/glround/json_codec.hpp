#pragma once

// Shared matrix/vector JSON encoding: exact entries are decimal strings
// ("-9", "1/3"), matrices are arrays of row arrays.

#include <nlohmann/json.hpp>

#include <string>

#include "glround/matrix.hpp"

namespace glround {

inline constexpr int kSchemaVersion = 1;

nlohmann::json encode(const Rational& q);
nlohmann::json encode(const ExactVector& v);
nlohmann::json encode(const ExactMatrix& m);
nlohmann::json encode(const RealMatrix& m);

/// Accepts strings or JSON integers. `where` prefixes error messages.
Rational decode_rational(const nlohmann::json& j, const std::string& where = "value");
ExactVector decode_vector(const nlohmann::json& j, const std::string& where = "vector");
ExactMatrix decode_matrix(const nlohmann::json& j, const std::string& where = "matrix");
RealMatrix decode_real_matrix(const nlohmann::json& j, const std::string& where = "matrix");

/// 64-bit FNV-1a of a byte string, rendered as 16 hex digits.
std::string digest_hex(std::string_view bytes);

}  // namespace glround
