#include "polyent/pl_map.hpp"

#include <algorithm>
#include <map>

#include "polyent/errors.hpp"

namespace polyent {

namespace {

bool same_affine(const Piece& a, const Piece& b) {
  return a.target == b.target && a.slope == b.slope && a.offset == b.offset;
}

// Flat pieces sitting on a vertex are re-targeted to the vertex's canonical
// edge, then collinear neighbours are merged.
std::vector<Piece> normalize_edge(const MetricGraph& g, std::vector<Piece> pieces) {
  for (Piece& p : pieces) {
    if (p.flat() && (p.offset == 0 || p.offset == 1)) {
      const GraphPoint v = g.canonical(p.target, p.offset);
      p.target = v.edge;
      p.offset = v.t;
    }
  }
  std::vector<Piece> out;
  out.reserve(pieces.size());
  for (Piece& p : pieces) {
    if (!out.empty() && same_affine(out.back(), p)) {
      out.back().end = p.end;
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace

PLMap::PLMap(std::shared_ptr<const MetricGraph> graph, std::vector<std::vector<Piece>> pieces)
    : graph_(std::move(graph)) {
  if (!graph_) throw MalformedMapError("PL map without a domain graph");
  const MetricGraph& g = *graph_;
  if (pieces.size() != g.edge_count())
    throw MalformedMapError("PL map lists pieces for " + std::to_string(pieces.size()) + " edges, graph has " +
                            std::to_string(g.edge_count()));
  for (auto& list : pieces)
    for (Piece& p : list) {
      p.start.canonicalize();
      p.end.canonicalize();
      p.slope.canonicalize();
      p.offset.canonicalize();
    }
  for (EdgeId e = 0; e < pieces.size(); ++e) {
    const auto& list = pieces[e];
    const std::string where = "edge " + std::to_string(e);
    if (list.empty()) throw MalformedMapError(where + " has no pieces");
    if (list.front().start != 0) throw MalformedMapError(where + ": first piece must start at 0");
    if (list.back().end != 1) throw MalformedMapError(where + ": last piece must end at 1");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Piece& p = list[i];
      if (!(p.start < p.end))
        throw MalformedMapError(where + ": empty or reversed piece [" + to_string(p.start) + ", " + to_string(p.end) + "]");
      if (i > 0 && list[i - 1].end != p.start)
        throw MalformedMapError(where + ": pieces are not contiguous at " + to_string(p.start));
      if (p.target >= g.edge_count()) throw MalformedMapError(where + ": target edge " + std::to_string(p.target) + " missing");
      const Rational a = p.image_of(p.start);
      const Rational b = p.image_of(p.end);
      if (a < 0 || a > 1 || b < 0 || b > 1)
        throw MalformedMapError(where + ": image of piece starting at " + to_string(p.start) + " leaves target edge " +
                                std::to_string(p.target));
    }
  }
  pieces_.reserve(pieces.size());
  for (auto& list : pieces) pieces_.push_back(normalize_edge(g, std::move(list)));
}

PLMap PLMap::identity(std::shared_ptr<const MetricGraph> graph) {
  std::vector<std::vector<Piece>> pieces;
  for (EdgeId e = 0; e < graph->edge_count(); ++e) pieces.push_back({Piece{0, 1, e, 1, 0}});
  return PLMap(std::move(graph), std::move(pieces));
}

std::size_t PLMap::piece_count() const {
  std::size_t total = 0;
  for (const auto& list : pieces_) total += list.size();
  return total;
}

std::size_t PLMap::piece_index(EdgeId e, const Rational& t) const {
  const auto& list = pieces_.at(e);
  // First piece whose end is >= t.
  auto it = std::lower_bound(list.begin(), list.end(), t, [](const Piece& p, const Rational& x) { return p.end < x; });
  if (it == list.end()) --it;
  return static_cast<std::size_t>(it - list.begin());
}

GraphPoint PLMap::apply(const GraphPoint& p) const {
  graph_->require_point(p);
  const Piece& piece = pieces_[p.edge][piece_index(p.edge, p.t)];
  return graph_->canonical(piece.target, piece.image_of(p.t));
}

bool PLMap::same_domain(const PLMap& other) const {
  return graph_ == other.graph_ || *graph_ == *other.graph_;
}

namespace {

struct ImageSpan {
  Rational lo;
  Rational hi;
};

ImageSpan image_span(const Piece& p) {
  Rational a = p.image_of(p.start);
  Rational b = p.image_of(p.end);
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

std::vector<GraphPoint> canonical_preimage_points(const PLMap& f, const GraphPoint& x) {
  const MetricGraph& g = f.domain();
  const VertexId v = g.vertex_at(x);
  std::vector<GraphPoint> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      const Edge& target = g.edge(p.target);
      std::vector<Rational> positions;
      if (v != MetricGraph::npos) {
        if (target.from == v) positions.emplace_back(0);
        if (target.to == v) positions.emplace_back(1);
      } else if (x.edge == p.target) {
        positions.push_back(x.t);
      }
      for (const Rational& pos : positions) {
        if (p.flat()) {
          if (p.offset == pos) {
            out.push_back(g.canonical(e, p.start));
            out.push_back(g.canonical(e, p.end));
          }
          continue;
        }
        const Rational t = (pos - p.offset) / p.slope;
        if (t >= p.start && t <= p.end) out.push_back(g.canonical(e, t));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ValidityReport validate_map(const PLMap& f) {
  const MetricGraph& g = f.domain();
  ValidityReport report;

  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto& list = f.pieces(e);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].flat()) report.has_flat_pieces = true;
      if (i + 1 == list.size()) continue;
      const GraphPoint left = g.canonical(list[i].target, list[i].image_of(list[i].end));
      const GraphPoint right = g.canonical(list[i + 1].target, list[i + 1].image_of(list[i + 1].start));
      if (!(left == right)) {
        report.continuous = false;
        report.violations.push_back("jump on edge " + std::to_string(e) + " at t=" + to_string(list[i].end) + ": " +
                                    to_string(left) + " vs " + to_string(right));
      }
    }
  }
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::optional<GraphPoint> value;
    for (EdgeId e : g.incident_edges(v)) {
      const Edge& edge = g.edge(e);
      std::vector<GraphPoint> ends;
      if (edge.from == v) ends.push_back(g.canonical(f.pieces(e).front().target, f.pieces(e).front().image_of(0)));
      if (edge.to == v) ends.push_back(g.canonical(f.pieces(e).back().target, f.pieces(e).back().image_of(1)));
      for (const GraphPoint& end : ends) {
        if (!value) {
          value = end;
        } else if (!(*value == end)) {
          report.continuous = false;
          report.violations.push_back("vertex '" + g.vertex_name(v) + "' has inconsistent images " + to_string(*value) +
                                      " and " + to_string(end));
        }
      }
    }
  }
  if (!report.continuous || report.has_flat_pieces) return report;

  // Bijectivity: piece images must tile every edge exactly once, and every
  // image of a breakpoint must have a single preimage point.
  std::vector<std::vector<ImageSpan>> spans(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) spans[p.target].push_back(image_span(p));
  }
  bool bijective = true;
  for (EdgeId e = 0; e < g.edge_count() && bijective; ++e) {
    auto& list = spans[e];
    std::sort(list.begin(), list.end(), [](const ImageSpan& a, const ImageSpan& b) { return a.lo < b.lo; });
    Rational reach = 0;
    for (const ImageSpan& s : list) {
      if (s.lo != reach) {
        bijective = false;
        break;
      }
      reach = s.hi;
    }
    if (reach != 1) bijective = false;
  }
  if (bijective) {
    std::vector<GraphPoint> critical;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      for (const Piece& p : f.pieces(e)) {
        critical.push_back(g.canonical(p.target, p.image_of(p.start)));
        critical.push_back(g.canonical(p.target, p.image_of(p.end)));
      }
    }
    std::sort(critical.begin(), critical.end());
    critical.erase(std::unique(critical.begin(), critical.end()), critical.end());
    for (const GraphPoint& x : critical) {
      if (canonical_preimage_points(f, x).size() != 1) {
        bijective = false;
        break;
      }
    }
  }
  if (!bijective) return report;

  HomeoCertificate cert;
  cert.bijective = true;
  std::vector<std::vector<Piece>> inverse(g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::vector<int> signs;
    for (const Piece& p : f.pieces(e)) {
      signs.push_back(p.slope > 0 ? 1 : -1);
      const ImageSpan s = image_span(p);
      Rational slope = 1 / p.slope;
      Rational offset = -p.offset / p.slope;
      inverse[p.target].push_back(Piece{s.lo, s.hi, e, std::move(slope), std::move(offset)});
    }
    cert.orientation.push_back(std::move(signs));
  }
  for (auto& list : inverse) {
    std::sort(list.begin(), list.end(), [](const Piece& a, const Piece& b) { return a.start < b.start; });
  }
  PLMap inv(f.graph(), std::move(inverse));

  // The inverse must undo f on every breakpoint and vertex, in both orders.
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (const Piece& p : f.pieces(e)) {
      for (const Rational& t : {p.start, p.end}) {
        const GraphPoint x = g.canonical(e, t);
        if (!(inv.apply(f.apply(x)) == x)) {
          report.violations.push_back("inverse fails at " + to_string(x));
          return report;
        }
      }
    }
    for (const Piece& p : inv.pieces(e)) {
      for (const Rational& t : {p.start, p.end}) {
        const GraphPoint x = g.canonical(e, t);
        if (!(f.apply(inv.apply(x)) == x)) {
          report.violations.push_back("inverse fails at " + to_string(x));
          return report;
        }
      }
    }
  }
  cert.inverse = std::move(inv);
  report.homeomorphism = true;
  report.certificate = std::move(cert);
  return report;
}

HomeoCertificate require_homeomorphism(const PLMap& f) {
  ValidityReport report = validate_map(f);
  if (!report.homeomorphism) {
    std::string why = !report.continuous ? "not continuous" : report.has_flat_pieces ? "has flat pieces" : "not bijective";
    throw NotHomeomorphismError("map is not a homeomorphism: " + why);
  }
  return std::move(*report.certificate);
}

PLMap compose(const PLMap& f, const PLMap& g, std::size_t piece_cap) {
  if (!f.same_domain(g)) throw DomainError("compose: maps live on different graphs");
  const MetricGraph& graph = g.domain();
  std::vector<std::vector<Piece>> out(graph.edge_count());
  std::size_t total = 0;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    auto& dest = out[e];
    for (const Piece& p : g.pieces(e)) {
      if (p.flat()) {
        const GraphPoint y = f.apply(GraphPoint{p.target, p.offset});
        dest.push_back(Piece{p.start, p.end, y.edge, 0, y.t});
        continue;
      }
      const auto& fp = f.pieces(p.target);
      const ImageSpan s = image_span(p);
      // First f-piece whose end exceeds the low end of the image.
      auto it = std::upper_bound(fp.begin(), fp.end(), s.lo, [](const Rational& x, const Piece& q) { return x < q.end; });
      const std::size_t first_out = dest.size();
      for (; it != fp.end() && it->start < s.hi; ++it) {
        const Rational lo = std::max(it->start, s.lo);
        const Rational hi = std::min(it->end, s.hi);
        Rational u0 = (lo - p.offset) / p.slope;
        Rational u1 = (hi - p.offset) / p.slope;
        if (u1 < u0) std::swap(u0, u1);
        dest.push_back(Piece{std::move(u0), std::move(u1), it->target, it->slope * p.slope, it->slope * p.offset + it->offset});
        if (total + dest.size() > piece_cap)
          throw ResourceError("composition exceeds the piece cap of " + std::to_string(piece_cap));
      }
      if (p.slope < 0) std::reverse(dest.begin() + static_cast<std::ptrdiff_t>(first_out), dest.end());
    }
    total += dest.size();
    if (total > piece_cap)
      throw ResourceError("composition exceeds the piece cap of " + std::to_string(piece_cap));
  }
  return PLMap(g.graph(), std::move(out));
}

PLMap iterate(const PLMap& f, std::size_t n, std::size_t piece_cap) {
  if (n == 0) throw DomainError("iterate needs n >= 1");
  std::optional<PLMap> result;
  PLMap power = f;
  for (std::size_t k = n;;) {
    if (k & 1U) result = result ? compose(*result, power, piece_cap) : power;
    k >>= 1U;
    if (k == 0) break;
    power = compose(power, power, piece_cap);
  }
  return *result;
}

}  // namespace polyent
