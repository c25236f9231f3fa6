#include "polyent/phase_space.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "polyent/errors.hpp"

namespace polyent {

std::string to_string(const GraphPoint& p) { return "(" + std::to_string(p.edge) + ", " + to_string(p.t) + ")"; }

const char* to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::interval: return "interval";
    case GraphKind::circle: return "circle";
    case GraphKind::tree: return "tree";
    case GraphKind::graph: return "graph";
  }
  return "graph";
}

const char* to_string(PointKind kind) {
  switch (kind) {
    case PointKind::endpoint: return "endpoint";
    case PointKind::ordinary: return "ordinary";
    case PointKind::branch: return "branch";
  }
  return "ordinary";
}

MetricGraph MetricGraph::interval(const Rational& length) {
  if (length <= 0) throw ConstructionError("interval length must be positive, got " + to_string(length));
  return MetricGraph({"0", "1"}, {Edge{0, 1, length}});
}

MetricGraph MetricGraph::circle(const Rational& circumference) {
  if (circumference <= 0)
    throw ConstructionError("circle circumference must be positive, got " + to_string(circumference));
  return MetricGraph({"0"}, {Edge{0, 0, circumference}});
}

MetricGraph MetricGraph::from_edges(const std::vector<std::string>& vertices, const std::vector<EdgeSpec>& edges) {
  if (vertices.empty()) throw ConstructionError("graph needs at least one vertex");
  if (edges.empty()) throw ConstructionError("graph needs at least one edge");
  std::map<std::string, VertexId> index;
  for (VertexId v = 0; v < vertices.size(); ++v) {
    if (!index.emplace(vertices[v], v).second) throw ConstructionError("duplicate vertex '" + vertices[v] + "'");
  }
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& spec : edges) {
    const auto a = index.find(spec.from);
    const auto b = index.find(spec.to);
    if (a == index.end() || b == index.end())
      throw ConstructionError("edge references unknown vertex '" + (a == index.end() ? spec.from : spec.to) + "'");
    if (spec.length <= 0)
      throw ConstructionError("edge " + spec.from + "-" + spec.to + " has nonpositive length " + to_string(spec.length));
    out.push_back(Edge{a->second, b->second, spec.length});
  }
  return MetricGraph(vertices, std::move(out));
}

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges)
    : vertex_names_(std::move(vertices)), edges_(std::move(edges)) {
  const std::size_t nv = vertex_names_.size();
  valence_.assign(nv, 0);
  incident_.assign(nv, {});
  lengths_.reserve(edges_.size());
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    lengths_.push_back(to_double(edge.length));
    valence_[edge.from] += 1;
    valence_[edge.to] += 1;
    incident_[edge.from].push_back(e);
    if (!edge.is_loop()) incident_[edge.to].push_back(e);
  }

  // Connectivity by union-find over edges.
  std::vector<VertexId> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const Edge& edge : edges_) parent[find(edge.from)] = find(edge.to);
  for (VertexId v = 0; v < nv; ++v) {
    if (find(v) != find(0)) throw ConstructionError("graph is disconnected at vertex '" + vertex_names_[v] + "'");
  }

  vertex_canonical_.resize(nv);
  for (VertexId v = 0; v < nv; ++v) {
    const EdgeId e = incident_[v].front();  // lowest id: edges are appended in order
    vertex_canonical_[v] = GraphPoint{e, Rational(edges_[e].from == v ? 0 : 1)};
  }

  // Floyd-Warshall on exact lengths; vertex counts are small.
  std::vector<std::optional<Rational>> d(nv * nv);
  for (VertexId v = 0; v < nv; ++v) d[v * nv + v] = Rational(0);
  for (const Edge& edge : edges_) {
    if (edge.is_loop()) continue;
    auto& ab = d[edge.from * nv + edge.to];
    if (!ab || edge.length < *ab) ab = edge.length;
    d[edge.to * nv + edge.from] = ab;
  }
  for (VertexId k = 0; k < nv; ++k) {
    for (VertexId i = 0; i < nv; ++i) {
      if (!d[i * nv + k]) continue;
      for (VertexId j = 0; j < nv; ++j) {
        if (!d[k * nv + j]) continue;
        Rational via = *d[i * nv + k] + *d[k * nv + j];
        auto& ij = d[i * nv + j];
        if (!ij || via < *ij) ij = std::move(via);
      }
    }
  }
  vdist_exact_.resize(nv * nv);
  vdist_.resize(nv * nv);
  for (std::size_t i = 0; i < nv * nv; ++i) {
    vdist_exact_[i] = *d[i];
    vdist_[i] = to_double(*d[i]);
  }

  if (edges_.size() == 1 && !edges_[0].is_loop()) {
    kind_ = GraphKind::interval;
  } else if (edges_.size() == 1) {
    kind_ = GraphKind::circle;
  } else if (edges_.size() + 1 == nv) {
    kind_ = GraphKind::tree;
  } else {
    kind_ = GraphKind::graph;
  }
}

VertexId MetricGraph::vertex_index(const std::string& name) const {
  for (VertexId v = 0; v < vertex_names_.size(); ++v) {
    if (vertex_names_[v] == name) return v;
  }
  throw DomainError("unknown vertex '" + name + "'");
}

void MetricGraph::require_point(const GraphPoint& p) const {
  if (p.edge >= edges_.size()) throw DomainError("point " + to_string(p) + " references a missing edge");
  if (p.t < 0 || p.t > 1) throw DomainError("point " + to_string(p) + " has offset outside [0,1]");
}

GraphPoint MetricGraph::canonical(EdgeId e, const Rational& t) const {
  GraphPoint p{e, t};
  p.t.canonicalize();
  require_point(p);
  if (p.t == 0) return vertex_canonical_[edges_[e].from];
  if (p.t == 1) return vertex_canonical_[edges_[e].to];
  return p;
}

VertexId MetricGraph::vertex_at(const GraphPoint& p) const {
  if (p.t == 0) return edges_.at(p.edge).from;
  if (p.t == 1) return edges_.at(p.edge).to;
  return npos;
}

Rational MetricGraph::distance_exact(const GraphPoint& p, const GraphPoint& q) const {
  require_point(p);
  require_point(q);
  const Edge& ep = edges_[p.edge];
  const Edge& eq = edges_[q.edge];
  const Rational p_from = p.t * ep.length;
  const Rational p_to = (1 - p.t) * ep.length;
  const Rational q_from = q.t * eq.length;
  const Rational q_to = (1 - q.t) * eq.length;
  Rational best = p_from + vertex_distance_exact(ep.from, eq.from) + q_from;
  auto relax = [&best](Rational candidate) {
    if (candidate < best) best = std::move(candidate);
  };
  relax(p_from + vertex_distance_exact(ep.from, eq.to) + q_to);
  relax(p_to + vertex_distance_exact(ep.to, eq.from) + q_from);
  relax(p_to + vertex_distance_exact(ep.to, eq.to) + q_to);
  if (p.edge == q.edge) relax(abs(Rational(p.t - q.t)) * ep.length);
  return best;
}

double MetricGraph::distance(const GraphPoint& p, const GraphPoint& q) const {
  return to_double(distance_exact(p, q));
}

Rational MetricGraph::diameter() const {
  // For points at arc-offsets s on e1 and u on e2 the distance is a minimum of
  // linear route lengths (plus |s-u| on a shared edge), hence concave on each
  // side of the diagonal. The maximum therefore sits at a vertex of the line
  // arrangement formed by route equalities and the box boundary.
  struct Line {
    Rational a, b, c;  // a*s + b*u = c
  };
  Rational best = 0;
  for (EdgeId e1 = 0; e1 < edges_.size(); ++e1) {
    for (EdgeId e2 = e1; e2 < edges_.size(); ++e2) {
      const Edge& x = edges_[e1];
      const Edge& y = edges_[e2];
      const Rational& l1 = x.length;
      const Rational& l2 = y.length;
      // Route k: cs*s + cu*u + c0.
      struct Affine {
        Rational cs, cu, c0;
      };
      std::vector<Affine> routes = {
          {1, 1, vertex_distance_exact(x.from, y.from)},
          {1, -1, vertex_distance_exact(x.from, y.to) + l2},
          {-1, 1, l1 + vertex_distance_exact(x.to, y.from)},
          {-1, -1, l1 + vertex_distance_exact(x.to, y.to) + l2},
      };
      if (e1 == e2) {
        routes.push_back({1, -1, 0});
        routes.push_back({-1, 1, 0});
      }
      std::vector<Line> lines = {{1, 0, 0}, {1, 0, l1}, {0, 1, 0}, {0, 1, l2}};
      if (e1 == e2) lines.push_back({1, -1, 0});
      for (std::size_t i = 0; i < routes.size(); ++i) {
        for (std::size_t j = i + 1; j < routes.size(); ++j) {
          lines.push_back({routes[i].cs - routes[j].cs, routes[i].cu - routes[j].cu, routes[j].c0 - routes[i].c0});
        }
      }
      for (std::size_t i = 0; i < lines.size(); ++i) {
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
          const Rational det = lines[i].a * lines[j].b - lines[i].b * lines[j].a;
          if (det == 0) continue;
          const Rational s = (lines[i].c * lines[j].b - lines[i].b * lines[j].c) / det;
          const Rational u = (lines[i].a * lines[j].c - lines[i].c * lines[j].a) / det;
          if (s < 0 || s > l1 || u < 0 || u > l2) continue;
          const Rational d = distance_exact(GraphPoint{e1, s / l1}, GraphPoint{e2, u / l2});
          if (d > best) best = d;
        }
      }
    }
  }
  return best;
}

PointClass MetricGraph::classify(const GraphPoint& p) const {
  require_point(p);
  const VertexId v = vertex_at(p);
  const int order = v == npos ? 2 : valence_[v];
  PointKind kind = PointKind::ordinary;
  if (order == 1) kind = PointKind::endpoint;
  if (order >= 3) kind = PointKind::branch;
  return PointClass{kind, order};
}

std::vector<GraphPoint> MetricGraph::sample_grid(const Rational& mesh) const {
  if (mesh <= 0) throw DomainError("sample mesh must be positive, got " + to_string(mesh));
  std::vector<GraphPoint> out;
  std::vector<bool> vertex_seen(vertex_count(), false);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const Edge& edge = edges_[e];
    const Rational ratio = edge.length / mesh;
    mpz_class steps = ratio.get_num() / ratio.get_den();
    if (steps * ratio.get_den() != ratio.get_num()) steps += 1;
    if (steps < 1) steps = 1;
    const unsigned long k = steps.get_ui();
    for (unsigned long i = 0; i <= k; ++i) {
      Rational t(i, k);
      t.canonicalize();
      if (i == 0 || i == k) {
        const VertexId v = i == 0 ? edge.from : edge.to;
        if (vertex_seen[v]) continue;
        vertex_seen[v] = true;
        out.push_back(vertex_canonical_[v]);
      } else {
        out.push_back(GraphPoint{e, t});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const MetricGraph& a, const MetricGraph& b) {
  if (a.vertex_names_.size() != b.vertex_names_.size() || a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t e = 0; e < a.edges_.size(); ++e) {
    const Edge& x = a.edges_[e];
    const Edge& y = b.edges_[e];
    if (x.from != y.from || x.to != y.to || x.length != y.length) return false;
  }
  return true;
}

}  // namespace polyent
