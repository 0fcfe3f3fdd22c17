#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "qgfilter/graph.hpp"

namespace qgfilter {

/// Reader for the JSON graph description format:
///
///   {
///     "units":    {"hbar": 1, "two_m": 1, "charge": 1},          (optional)
///     "edges":    [{"id", "from", "to", "length",
///                   "vector_potential"?, "scalar_potential"?}],
///     "vertices": [{"id", "condition"?}],
///     "contact":  {"vertex": id, "coupling": {"type", "alpha", "beta"?}}
///   }
///
/// Conditions: {"type": "free"}, {"type": "delta", "strength"}, {"type": "dirichlet"},
/// {"type": "st_form", "r", "T", "S"?}, {"type": "raw_ab", "A", "B"}. Matrix
/// entries are numbers or [re, im] pairs. Unknown keys are rejected.
namespace io {

using json = nlohmann::json;

namespace detail {

inline void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw InputError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InputError(std::string(where) + ": unknown key '" + key + "'");
  }
}

inline const json& require(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(std::string(where) + ": missing key '" + key + "'");
  return *it;
}

inline double number(const json& v, std::string_view where) {
  if (!v.is_number()) throw InputError(std::string(where) + ": expected a number");
  return v.get<double>();
}

/// Vertex and edge ids may be strings or integers.
inline std::string id_of(const json& v, std::string_view where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(std::string(where) + ": id must be a string or an integer");
}

inline cplx complex_entry(const json& v, std::string_view where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw InputError(std::string(where) + ": matrix entries must be numbers or [re, im]");
}

/// Matrix as an array of rows; `cols` fixes the width of empty matrices.
inline CMatrix matrix(const json& v, std::string_view where, Eigen::Index cols = -1) {
  if (!v.is_array()) throw InputError(std::string(where) + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  if (rows == 0) return CMatrix(0, cols < 0 ? 0 : cols);
  if (!v[0].is_array()) throw InputError(std::string(where) + ": expected an array of rows");
  const auto width = static_cast<Eigen::Index>(v[0].size());
  CMatrix m(rows, width);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != width) {
      throw InputError(std::string(where) + ": ragged matrix");
    }
    for (Eigen::Index j = 0; j < width; ++j) m(i, j) = complex_entry(row[static_cast<std::size_t>(j)], where);
  }
  return m;
}

inline VertexCondition parse_condition(const json& c, const std::string& where) {
  if (!c.is_object()) throw InputError(where + ": condition must be an object");
  const std::string type = require(c, "type", where).get<std::string>();
  if (type == "free") {
    check_keys(c, where, {"type"});
    return condition::Free{};
  }
  if (type == "delta") {
    check_keys(c, where, {"type", "strength"});
    return condition::Delta{number(require(c, "strength", where), where)};
  }
  if (type == "dirichlet") {
    check_keys(c, where, {"type"});
    return condition::Dirichlet{};
  }
  if (type == "st_form") {
    check_keys(c, where, {"type", "r", "T", "S"});
    const json& rj = require(c, "r", where);
    if (!rj.is_number_integer()) throw InputError(where + ": r must be an integer");
    const int r = rj.get<int>();
    condition::STForm st;
    st.r = r;
    st.T = matrix(require(c, "T", where), where);
    if (st.T.rows() == 0 && st.T.cols() == 0 && r > 0) st.T = CMatrix(r, 0);
    if (st.T.rows() != r) throw InputError(where + ": T must have r rows");
    st.S = c.contains("S") ? matrix(c["S"], where, r) : CMatrix::Zero(r, r);
    if (st.S.rows() != r || st.S.cols() != r) throw InputError(where + ": S must be r x r");
    if (st.S != st.S.adjoint()) throw InputError(where + ": S must be Hermitian");
    return st;
  }
  if (type == "raw_ab") {
    check_keys(c, where, {"type", "A", "B"});
    return condition::RawAB{matrix(require(c, "A", where), where), matrix(require(c, "B", where), where)};
  }
  throw InputError(where + ": unknown condition type '" + type + "'");
}

inline ContactCoupling parse_coupling(const json& c) {
  const std::string where = "contact.coupling";
  if (!c.is_object()) throw InputError(where + ": expected an object");
  const std::string type = require(c, "type", where).get<std::string>();
  if (type == "bandpass" || type == "bandstop") {
    check_keys(c, where, {"type", "alpha"});
    const double alpha = number(require(c, "alpha", where), where);
    if (type == "bandpass") return coupling::BandPass{alpha};
    return coupling::BandStop{alpha};
  }
  if (type == "separator") {
    check_keys(c, where, {"type", "alpha", "beta"});
    return coupling::Separator{number(require(c, "alpha", where), where), number(require(c, "beta", where), where)};
  }
  throw InputError(where + ": unknown coupling type '" + type + "'");
}

}  // namespace detail

inline GraphDescription parse_description(const json& root) {
  using namespace detail;
  check_keys(root, "graph", {"units", "edges", "vertices", "contact"});
  GraphDescription d;

  if (root.contains("units")) {
    const json& u = root["units"];
    check_keys(u, "units", {"hbar", "two_m", "charge"});
    if (u.contains("hbar")) d.units.hbar = number(u["hbar"], "units.hbar");
    if (u.contains("two_m")) d.units.two_m = number(u["two_m"], "units.two_m");
    if (u.contains("charge")) d.units.charge = number(u["charge"], "units.charge");
  }

  const json& edges = require(root, "edges", "graph");
  if (!edges.is_array()) throw InputError("edges: expected an array");
  for (const json& e : edges) {
    check_keys(e, "edge", {"id", "from", "to", "length", "vector_potential", "scalar_potential"});
    Edge edge;
    edge.id = id_of(require(e, "id", "edge"), "edge.id");
    const std::string where = "edge '" + edge.id + "'";
    edge.end_a = id_of(require(e, "from", where), where);
    edge.end_b = id_of(require(e, "to", where), where);
    edge.length = number(require(e, "length", where), where);
    if (e.contains("vector_potential")) edge.vector_potential = number(e["vector_potential"], where);
    if (e.contains("scalar_potential")) edge.scalar_potential = number(e["scalar_potential"], where);
    d.edges.push_back(std::move(edge));
  }

  const json& vertices = require(root, "vertices", "graph");
  if (!vertices.is_array()) throw InputError("vertices: expected an array");
  for (const json& v : vertices) {
    check_keys(v, "vertex", {"id", "condition"});
    VertexDecl decl;
    decl.id = id_of(require(v, "id", "vertex"), "vertex.id");
    if (v.contains("condition")) decl.condition = parse_condition(v["condition"], "vertex '" + decl.id + "'");
    d.vertices.push_back(std::move(decl));
  }

  const json& contact = require(root, "contact", "graph");
  check_keys(contact, "contact", {"vertex", "coupling"});
  d.contact = id_of(require(contact, "vertex", "contact"), "contact.vertex");
  d.coupling = parse_coupling(require(contact, "coupling", "contact"));
  return d;
}

/// Parses and validates a graph description given as JSON text.
inline MetricGraph parse_graph(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw InputError(std::string("graph file is not valid JSON: ") + err.what());
  } catch (const json::type_error& err) {
    throw InputError(std::string("graph file: ") + err.what());
  }
  try {
    return build_graph(parse_description(root));
  } catch (const json::exception& err) {
    throw InputError(std::string("graph file: ") + err.what());
  }
}

inline MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

}  // namespace io
}  // namespace qgfilter
