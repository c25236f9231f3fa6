#include <algorithm>
#include <map>
#include <numeric>

#include "polyent/errors.hpp"
#include "polyent/pl_map.hpp"

namespace polyent {

namespace {

void require_interval(const PLMap& f, const char* what) {
  if (f.domain().kind() != GraphKind::interval) throw DomainError(std::string(what) + " needs an interval domain");
}

int sign(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }

bool add_overflows(std::uint64_t a, std::uint64_t b) { return a > UINT64_MAX - b; }

// Lap structure of f^d restricted to a subinterval J of the domain, traversed
// left to right. Only the count and the directions of the two end laps are
// needed: two neighbouring laps merge exactly when their directions agree.
struct LapSummary {
  std::uint64_t count;
  int first;
  int last;
};

struct Lap {
  std::size_t image;  // interned interval id
  int dir;            // +1, -1, 0 (flat)
};

class LapCounter {
 public:
  explicit LapCounter(const PLMap& f) : f_(f) {}

  std::uint64_t count(std::size_t n) { return summary(intern(Rational(0), Rational(1)), n).count; }

 private:
  static constexpr std::size_t kMemoCap = 4'000'000;

  std::size_t intern(const Rational& lo, const Rational& hi) {
    auto [it, inserted] = ids_.try_emplace({lo, hi}, intervals_.size());
    if (inserted) {
      intervals_.emplace_back(lo, hi);
      laps_.emplace_back();
      laps_ready_.push_back(false);
    }
    return it->second;
  }

  // Maximal monotone laps of f on interval `id`, with their image intervals.
  const std::vector<Lap>& laps_of(std::size_t id) {
    if (laps_ready_[id]) return laps_[id];
    const Rational lo = intervals_[id].first;
    const Rational hi = intervals_[id].second;
    std::vector<std::pair<std::pair<Rational, Rational>, int>> runs;
    const auto& pieces = f_.pieces(0);
    if (lo == hi) {
      const Piece& p = pieces[f_.piece_index(0, lo)];
      const Rational y = p.image_of(lo);
      runs.push_back({{y, y}, 0});
    } else {
      for (const Piece& p : pieces) {
        if (!(p.end > lo && p.start < hi)) continue;
        const Rational a = std::max(p.start, lo);
        const Rational b = std::min(p.end, hi);
        Rational ya = p.image_of(a);
        Rational yb = p.image_of(b);
        if (yb < ya) std::swap(ya, yb);
        const int dir = sign(p.slope);
        if (!runs.empty() && runs.back().second == dir) {
          auto& img = runs.back().first;
          if (ya < img.first) img.first = ya;
          if (yb > img.second) img.second = yb;
        } else {
          runs.push_back({{std::move(ya), std::move(yb)}, dir});
        }
      }
    }
    std::vector<Lap> out;
    out.reserve(runs.size());
    for (const auto& [img, dir] : runs) out.push_back(Lap{intern(img.first, img.second), dir});
    laps_[id] = std::move(out);
    laps_ready_[id] = true;
    return laps_[id];
  }

  LapSummary summary(std::size_t id, std::size_t depth) {
    if (depth == 0) {
      const bool point = intervals_[id].first == intervals_[id].second;
      return point ? LapSummary{1, 0, 0} : LapSummary{1, 1, 1};
    }
    const auto key = std::make_pair(id, depth);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= kMemoCap) throw ResourceError("lap recursion exceeds its memo cap");

    const std::vector<Lap> children = laps_of(id);  // copy: recursion may grow laps_
    LapSummary total{0, 0, 0};
    bool started = false;
    for (const Lap& lap : children) {
      LapSummary child{1, 0, 0};
      if (lap.dir != 0) {
        child = summary(lap.image, depth - 1);
        if (lap.dir < 0) child = LapSummary{child.count, -child.last, -child.first};
      }
      if (!started) {
        total = child;
        started = true;
        continue;
      }
      std::uint64_t add = child.count - (total.last == child.first ? 1 : 0);
      if (add_overflows(total.count, add)) throw ResourceError("lap number exceeds 64 bits");
      total.count += add;
      total.last = child.last;
    }
    memo_.emplace(key, total);
    return total;
  }

  const PLMap& f_;
  std::map<std::pair<Rational, Rational>, std::size_t> ids_;
  std::vector<std::pair<Rational, Rational>> intervals_;
  std::vector<std::vector<Lap>> laps_;
  std::vector<bool> laps_ready_;
  std::map<std::pair<std::size_t, std::size_t>, LapSummary> memo_;
};

}  // namespace

std::uint64_t lap_number(const PLMap& f, std::size_t n) {
  require_interval(f, "lap_number");
  if (n == 0) throw DomainError("lap_number needs n >= 1");
  LapCounter counter(f);
  return counter.count(n);
}

std::uint64_t monotone_run_count(const PLMap& f) {
  require_interval(f, "monotone_run_count");
  std::uint64_t runs = 0;
  int prev = 2;
  for (const Piece& p : f.pieces(0)) {
    const int dir = sign(p.slope);
    if (dir != prev) ++runs;
    prev = dir;
  }
  return runs;
}

std::uint64_t lap_number_by_composition(const PLMap& f, std::size_t n, std::size_t piece_cap) {
  require_interval(f, "lap_number_by_composition");
  return monotone_run_count(iterate(f, n, piece_cap));
}

namespace {

struct PieceRef {
  Rational lo;
  Rational hi;
  EdgeId edge;
  std::size_t index;
};

// Pieces grouped by target edge, sorted by the low end of their image, with a
// running maximum of the high end so stabbing queries can stop early.
class ImageIndex {
 public:
  explicit ImageIndex(const PLMap& g) : g_(g), by_target_(g.domain().edge_count()), prefix_hi_(g.domain().edge_count()) {
    const MetricGraph& graph = g.domain();
    for (EdgeId e = 0; e < graph.edge_count(); ++e) {
      const auto& list = g.pieces(e);
      for (std::size_t i = 0; i < list.size(); ++i) {
        Rational a = list[i].image_of(list[i].start);
        Rational b = list[i].image_of(list[i].end);
        if (b < a) std::swap(a, b);
        by_target_[list[i].target].push_back(PieceRef{std::move(a), std::move(b), e, i});
      }
    }
    for (EdgeId e = 0; e < by_target_.size(); ++e) {
      auto& refs = by_target_[e];
      std::sort(refs.begin(), refs.end(), [](const PieceRef& x, const PieceRef& y) { return x.lo < y.lo; });
      auto& pm = prefix_hi_[e];
      pm.reserve(refs.size());
      for (const PieceRef& r : refs) pm.push_back(pm.empty() || r.hi > pm.back() ? r.hi : pm.back());
    }
  }

  const std::vector<PieceRef>& targeting(EdgeId e) const { return by_target_[e]; }

  template <typename Visit>
  void stab(EdgeId target, const Rational& pos, Visit&& visit) const {
    const auto& refs = by_target_[target];
    const auto& pm = prefix_hi_[target];
    auto it = std::upper_bound(refs.begin(), refs.end(), pos, [](const Rational& x, const PieceRef& r) { return x < r.lo; });
    for (std::ptrdiff_t i = (it - refs.begin()) - 1; i >= 0 && pm[static_cast<std::size_t>(i)] >= pos; --i) {
      const PieceRef& r = refs[static_cast<std::size_t>(i)];
      if (r.hi >= pos) visit(r, g_.pieces(r.edge)[r.index]);
    }
  }

 private:
  const PLMap& g_;
  std::vector<std::vector<PieceRef>> by_target_;
  std::vector<std::vector<Rational>> prefix_hi_;
};

std::uint64_t components_at(const PLMap& g, const ImageIndex& index, const GraphPoint& x) {
  const MetricGraph& graph = g.domain();
  std::vector<std::pair<EdgeId, Rational>> reps;  // x written on each edge it touches
  const VertexId v = graph.vertex_at(x);
  if (v != MetricGraph::npos) {
    for (EdgeId e : graph.incident_edges(v)) {
      if (graph.edge(e).from == v) reps.emplace_back(e, Rational(0));
      if (graph.edge(e).to == v) reps.emplace_back(e, Rational(1));
    }
  } else {
    reps.emplace_back(x.edge, x.t);
  }

  // Each element is a point or a segment of the preimage; elements touching
  // the same canonical point belong to one component.
  std::vector<std::pair<GraphPoint, GraphPoint>> elements;
  for (const auto& [target, pos] : reps) {
    index.stab(target, pos, [&](const PieceRef& ref, const Piece& p) {
      if (p.flat()) {
        if (p.offset == pos) elements.emplace_back(graph.canonical(ref.edge, p.start), graph.canonical(ref.edge, p.end));
        return;
      }
      const Rational t = (pos - p.offset) / p.slope;
      const GraphPoint y = graph.canonical(ref.edge, t);
      elements.emplace_back(y, y);
    });
  }
  if (elements.empty()) return 0;
  std::vector<std::size_t> parent(elements.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::map<GraphPoint, std::size_t> owner;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const GraphPoint* end : {&elements[i].first, &elements[i].second}) {
      auto [it, inserted] = owner.emplace(*end, i);
      if (!inserted) parent[find(i)] = find(it->second);
    }
  }
  std::uint64_t roots = 0;
  for (std::size_t i = 0; i < elements.size(); ++i) roots += find(i) == i ? 1 : 0;
  return roots;
}

std::uint64_t sup_components(const PLMap& g) {
  const MetricGraph& graph = g.domain();
  const ImageIndex index(g);
  std::uint64_t best = 0;
  std::vector<GraphPoint> critical;
  for (EdgeId e = 0; e < graph.edge_count(); ++e) {
    const auto& refs = index.targeting(e);
    std::vector<Rational> cuts = {Rational(0), Rational(1)};
    for (const PieceRef& r : refs) {
      cuts.push_back(r.lo);
      cuts.push_back(r.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (const Rational& c : cuts) critical.push_back(graph.canonical(e, c));

    // Away from the cut values the preimage is a set of isolated points, one
    // per non-flat piece whose image spans the gap.
    std::vector<std::int64_t> delta(cuts.size(), 0);
    for (const PieceRef& r : refs) {
      if (r.lo == r.hi) continue;
      const auto a = std::lower_bound(cuts.begin(), cuts.end(), r.lo) - cuts.begin();
      const auto b = std::lower_bound(cuts.begin(), cuts.end(), r.hi) - cuts.begin();
      delta[static_cast<std::size_t>(a)] += 1;
      delta[static_cast<std::size_t>(b)] -= 1;
    }
    std::int64_t running = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      running += delta[i];
      best = std::max(best, static_cast<std::uint64_t>(running));
    }
  }
  std::sort(critical.begin(), critical.end());
  critical.erase(std::unique(critical.begin(), critical.end()), critical.end());
  for (const GraphPoint& x : critical) best = std::max(best, components_at(g, index, x));
  return best;
}

}  // namespace

std::uint64_t preimage_components(const PLMap& g, const GraphPoint& x) {
  const GraphPoint c = g.domain().canonical(x);
  const ImageIndex index(g);
  return components_at(g, index, c);
}

std::uint64_t phi(const PLMap& f, std::size_t n, std::size_t piece_cap) {
  if (n == 0) throw DomainError("phi needs n >= 1");
  return sup_components(iterate(f, n, piece_cap));
}

}  // namespace polyent
