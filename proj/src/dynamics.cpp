#include <algorithm>
#include <random>

#include "polyent/errors.hpp"
#include "polyent/pl_map.hpp"

namespace polyent {

const char* to_string(Wandering w) {
  switch (w) {
    case Wandering::wandering: return "wandering";
    case Wandering::nonwandering: return "nonwandering";
    case Wandering::probe_nonrecurrent: return "probe_nonrecurrent";
  }
  return "nonwandering";
}

bool FixedSet::contains(const MetricGraph& g, const GraphPoint& p) const {
  const GraphPoint c = g.canonical(p);
  if (std::binary_search(points.begin(), points.end(), c)) return true;
  const VertexId v = g.vertex_at(c);
  for (const FixedSegment& s : segments) {
    if (s.edge == c.edge && c.t >= s.start && c.t <= s.end) return true;
    if (v == MetricGraph::npos) continue;
    const Edge& e = g.edge(s.edge);
    if ((s.start == 0 && e.from == v) || (s.end == 1 && e.to == v)) return true;
  }
  return false;
}

FixedSet fixed_points(const PLMap& f) {
  const MetricGraph& g = f.domain();
  FixedSet out;
  std::vector<GraphPoint> points;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      if (p.target != e) continue;
      if (p.slope == 1) {
        if (p.offset != 0) continue;
        if (!out.segments.empty() && out.segments.back().edge == e && out.segments.back().end == p.start) {
          out.segments.back().end = p.end;
        } else {
          out.segments.push_back(FixedSegment{e, p.start, p.end});
        }
        continue;
      }
      const Rational t = p.offset / (1 - p.slope);
      if (t >= p.start && t <= p.end) points.push_back(g.canonical(e, t));
    }
  }
  // Vertices can also be fixed through pieces aimed at another incident edge.
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const GraphPoint x = g.vertex_point(v);
    if (f.apply(x) == x) points.push_back(x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  FixedSet segments_only{{}, out.segments};
  for (const GraphPoint& x : points) {
    if (!segments_only.contains(g, x)) out.points.push_back(x);
  }
  return out;
}

FixedSet periodic_points(const PLMap& f, std::size_t k, std::size_t piece_cap) {
  return fixed_points(iterate(f, k, piece_cap));
}

namespace {

bool is_identity(const PLMap& f) {
  for (EdgeId e = 0; e < f.domain().edge_count(); ++e) {
    const auto& list = f.pieces(e);
    if (list.size() != 1 || list[0].target != e || list[0].slope != 1 || list[0].offset != 0) return false;
  }
  return true;
}

bool fixes_all_vertices_and_edges(const PLMap& f) {
  const MetricGraph& g = f.domain();
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!(f.apply(g.vertex_point(v)) == g.vertex_point(v))) return false;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      if (p.target != e) return false;
    }
  }
  return true;
}

// Interval homeomorphism rule: a point wanders iff it is not fixed (when f
// preserves orientation) or not fixed by f^2 (when f reverses it).
WanderingVerdict interval_rule(const PLMap& f, const GraphPoint& p, bool preserving, const char* where) {
  const MetricGraph& g = f.domain();
  const FixedSet fix = preserving ? fixed_points(f) : fixed_points(compose(f, f));
  const bool fixed = fix.contains(g, p);
  std::string method = std::string(where) + (preserving ? ", orientation-preserving: Fix(f) gap" : ", orientation-reversing: Fix(f^2) gap");
  return WanderingVerdict{fixed ? Wandering::nonwandering : Wandering::wandering, true, std::move(method)};
}

}  // namespace

WanderingVerdict wandering_status(const PLMap& f, const HomeoCertificate& certificate, const GraphPoint& point,
                                  const WanderingProbe& probe) {
  if (!certificate.bijective) throw NotHomeomorphismError("wandering_status needs a certified homeomorphism");
  const MetricGraph& g = f.domain();
  const GraphPoint p = g.canonical(point);

  if (g.kind() == GraphKind::interval) {
    const GraphPoint left = g.vertex_point(0);
    return interval_rule(f, p, f.apply(left) == left, "interval");
  }

  if (fixes_all_vertices_and_edges(f)) {
    if (g.vertex_at(p) != MetricGraph::npos) return {Wandering::nonwandering, true, "fixed vertex"};
    const bool preserving = f.pieces(p.edge).front().slope > 0;
    return interval_rule(f, p, preserving, "invariant edge");
  }

  {
    PLMap power = f;
    for (std::size_t m = 1; m <= 12; ++m) {
      if (is_identity(power)) return {Wandering::nonwandering, true, "f^" + std::to_string(m) + " is the identity"};
      try {
        power = compose(f, power, 10'000);
      } catch (const ResourceError&) {
        break;
      }
    }
  }

  if (g.kind() == GraphKind::circle) {
    bool rotation = true;
    for (const Piece& piece : f.pieces(0)) rotation = rotation && piece.slope == 1;
    if (rotation) return {Wandering::nonwandering, true, "circle rotation (isometry)"};
  }

  // Heuristic probe: follow a handful of points of the ball B(p, r) and look
  // for a return into the ball.
  const Rational radius = rational_from_double(probe.radius);
  std::vector<GraphPoint> ball = {p};
  for (const GraphPoint& q : g.sample_grid(radius / 4)) {
    if (!(q == p) && g.distance(p, q) < probe.radius) ball.push_back(q);
  }
  std::mt19937_64 rng(probe.seed);
  std::shuffle(ball.begin() + 1, ball.end(), rng);
  if (ball.size() > probe.ball_samples + 1) ball.resize(probe.ball_samples + 1);
  for (std::size_t k = 1; k <= probe.horizon; ++k) {
    for (GraphPoint& q : ball) {
      q = f.apply(q);
      if (g.distance(p, q) < probe.radius)
        return {Wandering::nonwandering, false, "probe: return into B(p,r) at step " + std::to_string(k)};
    }
  }
  return {Wandering::probe_nonrecurrent, false, "probe: no return within horizon"};
}

}  // namespace polyent
