#include "glround/json_codec.hpp"

#include <cstdint>
#include <cstdio>

namespace glround {

using nlohmann::json;

json encode(const Rational& q) { return to_string(q); }

json encode(const ExactVector& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

json encode(const ExactMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (const auto& q : m.row(r)) row.push_back(to_string(q));
    out.push_back(std::move(row));
  }
  return out;
}

json encode(const RealMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (double x : m.row(r)) row.push_back(x);
    out.push_back(std::move(row));
  }
  return out;
}

Rational decode_rational(const json& j, const std::string& where) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return parse_rational(j.dump());
  } catch (const ParseError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected an integer or rational string, got " + j.dump());
}

ExactVector decode_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array");
  ExactVector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(decode_rational(j[i], where + "[" + std::to_string(i + 1) + "]"));
  return v;
}

ExactMatrix decode_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected an array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) throw ParseError(where + ": row 1 is not an array");
  const std::size_t cols = j[0].size();
  std::vector<Rational> entries;
  entries.reserve(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(where + ": row " + std::to_string(r + 1) + " has the wrong length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      entries.push_back(
          decode_rational(j[r][c], where + " row " + std::to_string(r + 1) + " col " + std::to_string(c + 1)));
    }
  }
  return ExactMatrix(rows, cols, std::move(entries));
}

RealMatrix decode_real_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  std::vector<double> entries;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ParseError(where + ": row " + std::to_string(r + 1) + " has the wrong length");
    }
    for (const auto& x : j[r]) {
      if (x.is_number()) {
        entries.push_back(x.get<double>());
      } else {
        entries.push_back(to_double(decode_rational(x, where)));
      }
    }
  }
  return RealMatrix(rows, cols, std::move(entries));
}

std::string digest_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace glround
