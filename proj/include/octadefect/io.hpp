#pragma once

// JSON lattice documents:
//   {"n": int, "m": int, "q": int, "A": [[int, ...], ...], "label": "optional"}
// Integers may also be given as decimal strings when they exceed 64 bits.

#include <istream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "octadefect/lattice.hpp"

namespace octadefect {

using Json = nlohmann::ordered_json;

struct LatticeDocument {
  RationalLattice lattice;
  std::optional<std::string> label;
};

namespace detail {

inline Integer json_integer(const Json& v, const std::string& where) {
  if (v.is_number_integer()) {
    if (v.is_number_unsigned()) return Integer(std::to_string(v.get<std::uint64_t>()));
    return Integer(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    Integer x;
    if (!s.empty() && x.set_str(s, 10) == 0) return x;
  }
  fail(ErrorKind::invalid_input, where + ": expected an integer");
}

inline std::size_t json_count(const Json& doc, const char* key) {
  if (!doc.contains(key)) fail(ErrorKind::invalid_input, std::string("missing field \"") + key + "\"");
  const Integer v = json_integer(doc.at(key), key);
  if (v < 0 || !v.fits_ulong_p())
    fail(ErrorKind::invalid_input, std::string(key) + " must be a non-negative count");
  return v.get_ui();
}

}  // namespace detail

inline Json integer_to_json(const Integer& x) {
  if (x.fits_slong_p()) return Json(x.get_si());
  return Json(x.get_str());
}

inline LatticeDocument parse_lattice_document(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::invalid_input, "lattice document must be a JSON object");
  const std::size_t n = detail::json_count(doc, "n");
  const std::size_t m = detail::json_count(doc, "m");
  if (!doc.contains("q")) fail(ErrorKind::invalid_input, "missing field \"q\"");
  const Integer q = detail::json_integer(doc.at("q"), "q");
  if (q < 1) fail(ErrorKind::invalid_input, "q must be >= 1");
  if (n < 1) fail(ErrorKind::invalid_input, "n must be >= 1");
  if (!doc.contains("A") || !doc.at("A").is_array())
    fail(ErrorKind::invalid_input, "field \"A\" must be an array of rows");
  const Json& rows = doc.at("A");
  if (rows.size() != m)
    fail(ErrorKind::invalid_input, "A has " + std::to_string(rows.size()) + " rows but m = " +
                                       std::to_string(m));
  IntMatrix A(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const Json& row = rows.at(i);
    if (!row.is_array() || row.size() != n)
      fail(ErrorKind::invalid_input, "row " + std::to_string(i + 1) + " of A must have n = " +
                                         std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j)
      A(i, j) = detail::json_integer(row.at(j), "A[" + std::to_string(i + 1) + "]");
  }
  std::optional<std::string> label;
  if (doc.contains("label")) {
    if (!doc.at("label").is_string()) fail(ErrorKind::invalid_input, "label must be a string");
    label = doc.at("label").get<std::string>();
  }
  return {RationalLattice(q, std::move(A)), std::move(label)};
}

inline LatticeDocument read_lattice_document(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_lattice_document(buffer.str());
}

inline Json lattice_to_json(const RationalLattice& lattice,
                            const std::optional<std::string>& label = std::nullopt) {
  Json doc;
  doc["n"] = lattice.n();
  doc["m"] = lattice.m();
  doc["q"] = integer_to_json(lattice.q());
  Json rows = Json::array();
  for (std::size_t i = 0; i < lattice.m(); ++i) {
    Json row = Json::array();
    for (const auto& x : lattice.A().row(i)) row.push_back(integer_to_json(x));
    rows.push_back(std::move(row));
  }
  doc["A"] = std::move(rows);
  if (label) doc["label"] = *label;
  return doc;
}

inline Json rational_to_json(const Rational& x) { return Json(x.get_str()); }

inline Json rational_vector_to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

inline Json rational_matrix_to_json(const RationalMatrix& m) {
  Json out = Json::array();
  for (const auto& row : m) out.push_back(rational_vector_to_json(row));
  return out;
}

/// 1-based indices, as printed everywhere user-facing.
inline Json index_set_to_json(const IndexSet& s) {
  Json out = Json::array();
  for (std::size_t i : s) out.push_back(i + 1);
  return out;
}

}  // namespace octadefect
