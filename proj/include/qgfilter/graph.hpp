#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgfilter/conditions.hpp"
#include "qgfilter/coupling.hpp"
#include "qgfilter/units.hpp"

namespace qgfilter {

enum class EdgeSide { A, B };

/// One end of an edge. A self-loop contributes two ends to the same vertex.
struct EdgeEnd {
  std::size_t edge = 0;
  EdgeSide side = EdgeSide::A;

  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
};

/// Edge parametrized by x in [0, length] from end_a to end_b, carrying a
/// constant vector potential (oriented a -> b) and a constant scalar potential.
struct Edge {
  std::string id;
  std::string end_a;
  std::string end_b;
  double length = 1.0;
  double vector_potential = 0.0;
  double scalar_potential = 0.0;

  [[nodiscard]] bool is_loop() const { return end_a == end_b; }
};

struct VertexDecl {
  std::string id;
  std::optional<VertexCondition> condition;
};

/// Unvalidated input to build_graph.
struct GraphDescription {
  UnitSystem units;
  std::vector<Edge> edges;
  std::vector<VertexDecl> vertices;
  std::string contact;
  ContactCoupling coupling = coupling::BandPass{1.0};
};

/// Immutable, validated metric graph with a designated contact vertex.
///
/// Edge-ends at every vertex are ordered by edge file order, end_a before end_b.
/// The contact vertex has no condition of its own; it is joined to the
/// input/output half-lines through the contact coupling.
class MetricGraph {
 public:
  static MetricGraph build(GraphDescription desc);

  [[nodiscard]] const UnitSystem& units() const { return units_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] std::size_t vertex_count() const { return vertex_ids_.size(); }
  [[nodiscard]] const std::string& vertex_id(std::size_t v) const { return vertex_ids_.at(v); }
  [[nodiscard]] std::optional<std::size_t> find_vertex(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  [[nodiscard]] std::size_t contact() const { return contact_; }
  [[nodiscard]] const ContactCoupling& coupling() const { return coupling_; }
  [[nodiscard]] const std::vector<EdgeEnd>& ends_at(std::size_t v) const { return ends_.at(v); }
  [[nodiscard]] const std::vector<EdgeEnd>& contact_ends() const { return ends_.at(contact_); }
  /// n: number of edge-ends at the contact.
  [[nodiscard]] std::size_t contact_degree() const { return contact_ends().size(); }
  [[nodiscard]] std::size_t degree(std::size_t v) const { return ends_.at(v).size(); }
  /// Declared condition; empty for the contact vertex.
  [[nodiscard]] const std::optional<VertexCondition>& condition(std::size_t v) const {
    return conditions_.at(v);
  }
  /// Resolved (A, B) pair of a non-contact vertex.
  [[nodiscard]] const BoundaryPair& boundary(std::size_t v) const { return pairs_.at(v); }
  /// The description this graph was built from (ids, conditions, coupling).
  [[nodiscard]] GraphDescription description() const;

  /// Same graph with a different contact coupling.
  [[nodiscard]] MetricGraph with_coupling(const ContactCoupling& c) const;

 private:
  MetricGraph() = default;

  UnitSystem units_;
  std::vector<Edge> edges_;
  std::vector<std::string> vertex_ids_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::optional<VertexCondition>> conditions_;
  std::vector<BoundaryPair> pairs_;
  std::vector<std::vector<EdgeEnd>> ends_;
  std::size_t contact_ = 0;
  ContactCoupling coupling_;
};

inline MetricGraph MetricGraph::build(GraphDescription desc) {
  desc.units.validate();
  validate_coupling(desc.coupling);

  MetricGraph g;
  g.units_ = desc.units;
  g.coupling_ = desc.coupling;

  for (const auto& v : desc.vertices) {
    if (v.id.empty()) throw InputError("vertex with empty id");
    if (!g.index_.emplace(v.id, g.vertex_ids_.size()).second) {
      throw InputError("duplicate vertex id '" + v.id + "'");
    }
    g.vertex_ids_.push_back(v.id);
    g.conditions_.push_back(v.condition);
  }

  auto contact = g.find_vertex(desc.contact);
  if (!contact) throw InputError("contact vertex '" + desc.contact + "' is not declared");
  g.contact_ = *contact;
  if (g.conditions_[g.contact_]) {
    throw InputError("contact vertex '" + desc.contact + "' must not carry its own condition");
  }

  g.ends_.assign(g.vertex_ids_.size(), {});
  std::map<std::string, int> edge_ids;
  for (std::size_t e = 0; e < desc.edges.size(); ++e) {
    const Edge& edge = desc.edges[e];
    if (!edge_ids.emplace(edge.id, 0).second) {
      throw InputError("duplicate edge id '" + edge.id + "'");
    }
    if (!(edge.length > 0.0) || !std::isfinite(edge.length)) {
      throw InputError("edge '" + edge.id + "': length must be positive");
    }
    if (!std::isfinite(edge.vector_potential) || !std::isfinite(edge.scalar_potential)) {
      throw InputError("edge '" + edge.id + "': potentials must be finite");
    }
    auto a = g.find_vertex(edge.end_a);
    auto b = g.find_vertex(edge.end_b);
    if (!a || !b) throw InputError("edge '" + edge.id + "' references an undeclared vertex");
    g.ends_[*a].push_back({e, EdgeSide::A});
    g.ends_[*b].push_back({e, EdgeSide::B});
  }
  g.edges_ = std::move(desc.edges);

  if (g.ends_[g.contact_].empty()) throw InputError("contact vertex has no incident edge");

  // Connectivity over vertices.
  std::vector<std::size_t> parent(g.vertex_ids_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& edge : g.edges_) {
    parent[find(g.index_.at(edge.end_a))] = find(g.index_.at(edge.end_b));
  }
  const std::size_t root = find(g.contact_);
  for (std::size_t v = 0; v < g.vertex_ids_.size(); ++v) {
    if (find(v) != root) throw InputError("graph is not connected (vertex '" + g.vertex_ids_[v] + "')");
  }

  g.pairs_.resize(g.vertex_ids_.size());
  for (std::size_t v = 0; v < g.vertex_ids_.size(); ++v) {
    if (v == g.contact_) continue;
    const VertexCondition cond = g.conditions_[v].value_or(condition::Free{});
    try {
      g.pairs_[v] = to_boundary_pair(cond, g.ends_[v].size());
    } catch (const InputError& err) {
      throw InputError("vertex '" + g.vertex_ids_[v] + "': " + err.what());
    }
    if (g.ends_[v].empty()) continue;
    const auto report = validate_vertex_condition(g.pairs_[v].A, g.pairs_[v].B, 1e-10);
    if (!report.ok) {
      throw InputError("vertex '" + g.vertex_ids_[v] + "': condition is not self-adjoint");
    }
  }
  return g;
}

inline GraphDescription MetricGraph::description() const {
  GraphDescription d;
  d.units = units_;
  d.edges = edges_;
  for (std::size_t v = 0; v < vertex_ids_.size(); ++v) d.vertices.push_back({vertex_ids_[v], conditions_[v]});
  d.contact = vertex_ids_[contact_];
  d.coupling = coupling_;
  return d;
}

inline MetricGraph MetricGraph::with_coupling(const ContactCoupling& c) const {
  validate_coupling(c);
  MetricGraph g = *this;
  g.coupling_ = c;
  return g;
}

inline MetricGraph build_graph(GraphDescription desc) { return MetricGraph::build(std::move(desc)); }

}  // namespace qgfilter
