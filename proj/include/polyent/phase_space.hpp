#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "polyent/rational.hpp"

namespace polyent {

using EdgeId = std::size_t;
using VertexId = std::size_t;

struct Edge {
  VertexId from;
  VertexId to;
  Rational length;

  bool is_loop() const { return from == to; }
};

// A location on a metric graph: fraction t of the edge length measured from
// the edge's `from` vertex. Canonical form puts a vertex on its lowest-id
// incident edge; equality is representation equality after canonicalization.
struct GraphPoint {
  EdgeId edge = 0;
  Rational t;

  friend bool operator==(const GraphPoint& a, const GraphPoint& b) {
    return a.edge == b.edge && a.t == b.t;
  }
  friend bool operator<(const GraphPoint& a, const GraphPoint& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  }
};

std::string to_string(const GraphPoint& p);

// Floating-point image of a canonical GraphPoint, used inside the estimation kernels.
struct NumericPoint {
  double t = 0.0;
  std::uint32_t edge = 0;
};

enum class GraphKind { interval, circle, tree, graph };

enum class PointKind { endpoint, ordinary, branch };

struct PointClass {
  PointKind kind;
  int order;
};

const char* to_string(GraphKind kind);
const char* to_string(PointKind kind);

struct EdgeSpec {
  std::string from;
  std::string to;
  Rational length;
};

class MetricGraph {
 public:
  static MetricGraph interval(const Rational& length);
  // One vertex carrying one loop edge.
  static MetricGraph circle(const Rational& circumference);
  static MetricGraph from_edges(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v); }
  VertexId vertex_index(const std::string& name) const;

  GraphKind kind() const { return kind_; }
  // First Betti number |E| - |V| + 1.
  std::size_t cycle_count() const { return edges_.size() + 1 - vertex_names_.size(); }

  // Number of edge-ends at v (a loop counts twice).
  int valence(VertexId v) const { return valence_.at(v); }
  const std::vector<EdgeId>& incident_edges(VertexId v) const { return incident_.at(v); }

  GraphPoint vertex_point(VertexId v) const { return vertex_canonical_.at(v); }
  // Vertex at which p sits, or npos.
  VertexId vertex_at(const GraphPoint& p) const;
  static constexpr VertexId npos = static_cast<VertexId>(-1);

  // Throws DomainError for points off the graph.
  GraphPoint canonical(EdgeId e, const Rational& t) const;
  GraphPoint canonical(const GraphPoint& p) const { return canonical(p.edge, p.t); }
  void require_point(const GraphPoint& p) const;

  Rational distance_exact(const GraphPoint& p, const GraphPoint& q) const;
  double distance(const GraphPoint& p, const GraphPoint& q) const;

  inline double distance(const NumericPoint& p, const NumericPoint& q) const noexcept;

  NumericPoint numeric(const GraphPoint& p) const {
    return NumericPoint{to_double(p.t), static_cast<std::uint32_t>(p.edge)};
  }

  const Rational& vertex_distance_exact(VertexId u, VertexId v) const { return vdist_exact_[u * vertex_count() + v]; }
  double vertex_distance(VertexId u, VertexId v) const { return vdist_[u * vertex_count() + v]; }
  double edge_length(EdgeId e) const { return lengths_[e]; }
  Rational diameter() const;

  PointClass classify(const GraphPoint& p) const;

  // Deterministic grid: every vertex, and along each edge consecutive
  // samples at spacing <= mesh. Sorted by (edge, t), duplicates removed.
  std::vector<GraphPoint> sample_grid(const Rational& mesh) const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  std::vector<std::string> vertex_names_;
  std::vector<Edge> edges_;
  std::vector<double> lengths_;
  std::vector<int> valence_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<GraphPoint> vertex_canonical_;
  std::vector<Rational> vdist_exact_;
  std::vector<double> vdist_;
  GraphKind kind_ = GraphKind::graph;
};

inline double MetricGraph::distance(const NumericPoint& a, const NumericPoint& b) const noexcept {
  // Fixed argument order so rounding cannot make the result asymmetric.
  const bool swap = b.edge < a.edge || (b.edge == a.edge && b.t < a.t);
  const NumericPoint& p = swap ? b : a;
  const NumericPoint& q = swap ? a : b;
  const Edge& ep = edges_[p.edge];
  const Edge& eq = edges_[q.edge];
  const double lp = lengths_[p.edge];
  const double lq = lengths_[q.edge];
  const std::size_t nv = vertex_names_.size();
  double best = std::numeric_limits<double>::infinity();
  if (p.edge == q.edge) best = std::abs(p.t - q.t) * lp;
  const double p_from = p.t * lp;
  const double p_to = (1.0 - p.t) * lp;
  const double q_from = q.t * lq;
  const double q_to = (1.0 - q.t) * lq;
  best = std::min(best, p_from + vdist_[ep.from * nv + eq.from] + q_from);
  best = std::min(best, p_from + vdist_[ep.from * nv + eq.to] + q_to);
  best = std::min(best, p_to + vdist_[ep.to * nv + eq.from] + q_from);
  best = std::min(best, p_to + vdist_[ep.to * nv + eq.to] + q_to);
  return best;
}

}  // namespace polyent
