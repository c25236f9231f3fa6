#include <algorithm>
#include <cmath>
#include <map>

#include "polyent/errors.hpp"
#include "polyent/systems.hpp"

namespace polyent {

std::string to_string(const SystemPoint& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += to_string(p[i]);
  }
  return out + "]";
}

bool OrbitTable::within(std::size_t i, std::size_t j, std::size_t n, double eps) const {
  for (std::size_t k = 0; k < n; ++k) {
    if (step_distance(i, j, k) >= eps) return false;
  }
  return true;
}

double OrbitTable::dynamic_distance(std::size_t i, std::size_t j, std::size_t n) const {
  if (n == 0 || n > horizon()) throw DomainError("dynamic distance needs 1 <= n <= horizon");
  double best = 0.0;
  for (std::size_t k = 0; k < n; ++k) best = std::max(best, step_distance(i, j, k));
  return best;
}

// ---------------------------------------------------------------------------
// GraphOrbitTable

GraphOrbitTable::GraphOrbitTable(std::shared_ptr<const MetricGraph> graph, std::vector<GraphPoint> points,
                                 std::size_t horizon, std::vector<NumericPoint> orbits, std::vector<std::uint32_t> levels)
    : graph_(std::move(graph)),
      points_(std::move(points)),
      horizon_(horizon),
      orbits_(std::move(orbits)),
      levels_(std::move(levels)) {
  if (horizon_ == 0) throw DomainError("orbit table needs a positive horizon");
  if (orbits_.size() != points_.size() * horizon_) throw DomainError("orbit table shape mismatch");
  if (levels_.empty()) levels_.assign(points_.size(), 1);
  if (levels_.size() != points_.size()) throw DomainError("orbit table level mismatch");
  if (points_.size() > UINT32_MAX) throw ResourceError("orbit table too large");
  // Early times at 2^m - 1, then every kProbeSpacing steps: an orbit passing
  // through a sparse region of the sample is seen there by some probe.
  constexpr std::size_t kProbeSpacing = 8;
  for (std::size_t t = 1; t - 1 < horizon_ && t - 1 < kProbeSpacing; t *= 2) probe_times_.push_back(t - 1);
  for (std::size_t t = kProbeSpacing; t < horizon_; t += kProbeSpacing) probe_times_.push_back(t);
  if (probe_times_.back() != horizon_ - 1) probe_times_.push_back(horizon_ - 1);
  index_.resize(probe_times_.size());
  for (std::size_t p = 0; p < probe_times_.size(); ++p) {
    auto& per_edge = index_[p];
    per_edge.resize(graph_->edge_count());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const NumericPoint& x = at(i, probe_times_[p]);
      per_edge[x.edge].push_back(Entry{x.t, static_cast<std::uint32_t>(i)});
    }
    for (auto& list : per_edge) {
      std::sort(list.begin(), list.end(), [](const Entry& a, const Entry& b) {
        return a.t < b.t || (a.t == b.t && a.index < b.index);
      });
    }
  }
}

bool GraphOrbitTable::within(std::size_t i, std::size_t j, std::size_t n, double eps) const {
  const NumericPoint* a = &orbits_[i * horizon_];
  const NumericPoint* b = &orbits_[j * horizon_];
  for (std::size_t k = 0; k < n; ++k) {
    if (graph_->distance(a[k], b[k]) >= eps) return false;
  }
  return true;
}

std::shared_ptr<const GraphOrbitTable> GraphOrbitTable::restricted_graph(std::size_t n) const {
  if (n == 0 || n > horizon_) throw DomainError("restriction horizon must lie in 1..horizon");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (levels_[i] <= n) keep.push_back(i);
  }
  if (keep.size() == points_.size()) return nullptr;
  std::vector<GraphPoint> points;
  std::vector<NumericPoint> orbits;
  std::vector<std::uint32_t> levels;
  points.reserve(keep.size());
  orbits.reserve(keep.size() * n);
  for (std::size_t i : keep) {
    points.push_back(points_[i]);
    levels.push_back(levels_[i]);
    const auto first = orbits_.begin() + static_cast<std::ptrdiff_t>(i * horizon_);
    orbits.insert(orbits.end(), first, first + static_cast<std::ptrdiff_t>(n));
  }
  auto out = std::make_shared<GraphOrbitTable>(graph_, std::move(points), n, std::move(orbits), std::move(levels));
  out->mesh = mesh;
  out->notes = notes;
  return out;
}

std::shared_ptr<const OrbitTable> table_for_horizon(const std::shared_ptr<const OrbitTable>& table, std::size_t n) {
  auto r = table->restricted(n);
  return r ? r : table;
}

std::size_t GraphOrbitTable::probes_below(std::size_t n) const {
  std::size_t count = 0;
  while (count < probe_times_.size() && probe_times_[count] < n) ++count;
  return count;
}

template <typename Visit>
void GraphOrbitTable::visit_ranges(const NumericPoint& c, std::size_t probe, double radius, Visit&& visit) const {
  // Slack keeps the ranges a superset despite rounding; callers filter exactly.
  constexpr double kSlack = 1e-12;
  const MetricGraph& g = *graph_;
  const Edge& e = g.edge(c.edge);
  const double len = g.edge_length(c.edge);
  const auto& lists = index_[probe];
  auto range = [&](EdgeId edge, double lo, double hi) {
    const auto& list = lists[edge];
    auto first = std::lower_bound(list.begin(), list.end(), lo - kSlack, [](const Entry& x, double v) { return x.t < v; });
    auto last = std::upper_bound(first, list.end(), hi + kSlack, [](double v, const Entry& x) { return v < x.t; });
    visit(first, last);
  };
  range(c.edge, c.t - radius / len, c.t + radius / len);
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    const double dw = std::min(c.t * len + g.vertex_distance(e.from, w), (1.0 - c.t) * len + g.vertex_distance(e.to, w));
    if (dw >= radius + kSlack) continue;
    const double rest = radius - dw;
    for (EdgeId other : g.incident_edges(w)) {
      const double l = g.edge_length(other);
      if (g.edge(other).from == w) range(other, 0.0, rest / l);
      if (g.edge(other).to == w) range(other, 1.0 - rest / l, 1.0);
    }
  }
}

void GraphOrbitTable::neighbours_at(const NumericPoint& centre, std::size_t probe, double radius,
                                    std::vector<std::uint32_t>& out) const {
  const std::size_t k = probe_times_[probe];
  visit_ranges(centre, probe, radius, [&](auto first, auto last) {
    for (auto it = first; it != last; ++it) {
      if (graph_->distance(centre, at(it->index, k)) < radius) out.push_back(it->index);
    }
  });
}

std::size_t GraphOrbitTable::neighbour_bound(const NumericPoint& centre, std::size_t probe, double radius) const {
  std::size_t total = 0;
  visit_ranges(centre, probe, radius, [&](auto first, auto last) { total += static_cast<std::size_t>(last - first); });
  return total;
}

void GraphOrbitTable::candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const {
  out.clear();
  const std::size_t probes = probes_below(std::min(n, horizon_));
  std::size_t best = 0;
  std::size_t best_bound = SIZE_MAX;
  for (std::size_t p = 0; p < probes; ++p) {
    const std::size_t bound = neighbour_bound(at(i, probe_times_[p]), p, eps);
    if (bound < best_bound) {
      best_bound = bound;
      best = p;
    }
  }
  neighbours_at(at(i, probe_times_[best]), best, eps, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (probes > 1) {
    std::erase_if(out, [&](std::uint32_t j) {
      for (std::size_t p = 0; p < probes; ++p) {
        if (p == best) continue;
        const std::size_t k = probe_times_[p];
        if (graph_->distance(at(i, k), at(j, k)) >= eps) return true;
      }
      return false;
    });
  }
}

// ---------------------------------------------------------------------------
// GraphSystem

GraphSystem::GraphSystem(std::string name, PLMap f, std::size_t step)
    : name_(std::move(name)), f_(std::move(f)), step_(step) {
  if (step_ == 0) throw DomainError("system step must be positive");
}

GraphPoint GraphSystem::apply_point(const GraphPoint& p) const {
  GraphPoint q = graph().canonical(p);
  if (h_inverse_) q = h_inverse_->apply(q);
  for (std::size_t s = 0; s < step_; ++s) q = f_.apply(q);
  if (h_) q = h_->apply(q);
  return q;
}

PLMap GraphSystem::system_map() const {
  PLMap out = iterate(f_, step_);
  if (h_) out = compose(*h_, compose(out, *h_inverse_));
  return out;
}

SystemPoint GraphSystem::apply(const SystemPoint& p) const {
  if (p.size() != 1) throw DomainError("graph system points have one coordinate");
  return {apply_point(p[0])};
}

double GraphSystem::distance(const SystemPoint& p, const SystemPoint& q) const {
  if (p.size() != 1 || q.size() != 1) throw DomainError("graph system points have one coordinate");
  return graph().distance(p[0], q[0]);
}

std::vector<SystemPoint> GraphSystem::sample(const Rational& mesh) const {
  std::vector<SystemPoint> out;
  for (const GraphPoint& p : graph().sample_grid(mesh)) out.push_back({p});
  return out;
}

std::vector<NumericPoint> GraphSystem::orbit(const GraphPoint& p, std::size_t horizon) const {
  const MetricGraph& g = graph();
  std::vector<NumericPoint> out;
  out.reserve(horizon);
  GraphPoint q = g.canonical(p);
  if (horizon == 0) return out;
  out.push_back(g.numeric(q));
  if (h_inverse_) q = h_inverse_->apply(q);
  for (std::size_t k = 1; k < horizon; ++k) {
    for (std::size_t s = 0; s < step_; ++s) q = f_.apply(q);
    out.push_back(g.numeric(h_ ? h_->apply(q) : q));
  }
  return out;
}

void GraphSystem::fill_cache(const std::vector<GraphPoint>& points, std::size_t horizon) const {
  std::vector<GraphPoint> missing;
  {
    std::lock_guard lock(cache_mutex_);
    for (const GraphPoint& p : points) {
      auto it = cache_.find(p);
      if (it == cache_.end() || it->second.size() < horizon) missing.push_back(p);
    }
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  std::vector<std::vector<NumericPoint>> orbits(missing.size());
  const auto count = static_cast<std::ptrdiff_t>(missing.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    orbits[static_cast<std::size_t>(i)] = orbit(missing[static_cast<std::size_t>(i)], horizon);
  }
  std::lock_guard lock(cache_mutex_);
  for (std::size_t i = 0; i < missing.size(); ++i) cache_[missing[i]] = std::move(orbits[i]);
}

const std::vector<NumericPoint>& GraphSystem::cached_orbit(const GraphPoint& p, std::size_t horizon) const {
  std::lock_guard lock(cache_mutex_);
  auto it = cache_.find(p);
  if (it == cache_.end() || it->second.size() < horizon) throw DomainError("orbit cache miss");
  return it->second;
}

std::shared_ptr<const GraphOrbitTable> GraphSystem::build_table(std::vector<GraphPoint> points, std::size_t horizon,
                                                                std::vector<std::uint32_t> levels) const {
  fill_cache(points, horizon);
  std::vector<NumericPoint> orbits(points.size() * horizon);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& o = cached_orbit(points[i], horizon);
    std::copy_n(o.begin(), horizon, orbits.begin() + static_cast<std::ptrdiff_t>(i * horizon));
  }
  return std::make_shared<GraphOrbitTable>(f_.graph(), std::move(points), horizon, std::move(orbits),
                                           std::move(levels));
}

namespace {

struct BudgetExceeded {};

struct Segment {
  EdgeId edge;
  Rational a;
  Rational b;
  std::uint32_t level;  // smallest horizon whose refinement has this segment
};

}  // namespace

// Start from the grid at spacing `mesh` and bisect every grid segment whose
// endpoints drift more than `mesh` apart within the horizon. For a
// homeomorphism of an interval or a tree, every point between two samples stays
// between their images, so the result is a mesh-net for d_horizon.
std::shared_ptr<const GraphOrbitTable> GraphSystem::refine(const Rational& mesh, const NetRequest& request) const {
  const MetricGraph& g = graph();
  const std::size_t horizon = request.horizon;
  const double limit = to_double(mesh);
  std::map<GraphPoint, std::uint32_t> points;  // point -> level
  std::vector<Segment> segments;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    mpz_class k;
    const Rational ratio = g.edge(e).length / mesh;
    mpz_cdiv_q(k.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
    if (k < 1) k = 1;
    for (mpz_class i = 0; i < k; ++i) {
      Rational a(i, k);
      Rational b(i + 1, k);
      a.canonicalize();
      b.canonicalize();
      points.emplace(g.canonical(e, a), 1);
      points.emplace(g.canonical(e, b), 1);
      segments.push_back(Segment{e, a, b, 1});
    }
  }
  auto over_budget = [&](std::size_t n) { return n > request.sample_budget || n * horizon > request.orbit_budget; };
  if (over_budget(points.size())) throw BudgetExceeded{};
  {
    std::vector<GraphPoint> first;
    for (const auto& [p, level] : points) first.push_back(p);
    fill_cache(first, horizon);
  }

  while (!segments.empty()) {
    // exceed[s]: first time at which the endpoints are more than mesh apart, or horizon.
    std::vector<std::size_t> exceed(segments.size(), horizon);
    const auto count = static_cast<std::ptrdiff_t>(segments.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
      const Segment& seg = segments[static_cast<std::size_t>(s)];
      const auto& oa = cached_orbit(g.canonical(seg.edge, seg.a), horizon);
      const auto& ob = cached_orbit(g.canonical(seg.edge, seg.b), horizon);
      for (std::size_t k = 0; k < horizon; ++k) {
        if (g.distance(oa[k], ob[k]) > limit) {
          exceed[static_cast<std::size_t>(s)] = k;
          break;
        }
      }
    }
    std::vector<Segment> next;
    std::vector<GraphPoint> fresh;
    std::vector<std::uint32_t> fresh_levels;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (exceed[s] == horizon) continue;
      Segment& seg = segments[s];
      const auto level = std::max(seg.level, static_cast<std::uint32_t>(exceed[s] + 1));
      Rational mid = (seg.a + seg.b) / 2;
      fresh.push_back(g.canonical(seg.edge, mid));
      fresh_levels.push_back(level);
      next.push_back(Segment{seg.edge, seg.a, mid, level});
      next.push_back(Segment{seg.edge, mid, std::move(seg.b), level});
    }
    if (over_budget(points.size() + fresh.size())) throw BudgetExceeded{};
    fill_cache(fresh, horizon);
    for (std::size_t i = 0; i < fresh.size(); ++i) {
      auto [it, inserted] = points.emplace(fresh[i], fresh_levels[i]);
      if (!inserted) it->second = std::min(it->second, fresh_levels[i]);
    }
    segments = std::move(next);
  }
  std::vector<GraphPoint> list;
  std::vector<std::uint32_t> levels;
  for (auto& [p, level] : points) {
    list.push_back(p);
    levels.push_back(level);
  }
  return build_table(std::move(list), horizon, std::move(levels));
}

std::shared_ptr<const GraphOrbitTable> GraphSystem::graph_table(const NetRequest& request) const {
  if (request.mesh <= 0) throw DomainError("sample mesh must be positive");
  if (request.horizon == 0) throw DomainError("orbit horizon must be positive");
  const bool refining = request.refine && request.horizon > 1;
  if (refining) {
    Rational mesh = request.mesh;
    for (int attempt = 0; attempt < 4; ++attempt, mesh *= 2) {
      try {
        auto table = refine(mesh, request);
        auto out = std::const_pointer_cast<GraphOrbitTable>(table);
        out->mesh = to_double(mesh);
        if (attempt > 0) out->notes.push_back("net coarsened to mesh " + to_string(mesh) + " by the sample budget");
        return out;
      } catch (const BudgetExceeded&) {
      }
    }
  }
  auto points = graph().sample_grid(request.mesh);
  if (points.size() > request.sample_budget || points.size() * request.horizon > request.orbit_budget)
    throw ResourceError("sample of " + std::to_string(points.size()) + " points exceeds the sample budget");
  auto out = std::const_pointer_cast<GraphOrbitTable>(build_table(std::move(points), request.horizon));
  out->mesh = to_double(request.mesh);
  if (refining) out->notes.push_back("dynamic refinement exceeded the sample budget; plain grid used");
  return out;
}

std::shared_ptr<const GraphOrbitTable> GraphSystem::graph_table_for(const std::vector<GraphPoint>& points,
                                                                    std::size_t horizon) const {
  std::vector<GraphPoint> canon;
  canon.reserve(points.size());
  for (const GraphPoint& p : points) canon.push_back(graph().canonical(p));
  return build_table(std::move(canon), horizon);
}

std::shared_ptr<const OrbitTable> GraphSystem::orbit_table(const NetRequest& request) const {
  return graph_table(request);
}

std::shared_ptr<const OrbitTable> GraphSystem::orbit_table_for(const std::vector<SystemPoint>& points,
                                                               std::size_t horizon) const {
  std::vector<GraphPoint> flat;
  for (const SystemPoint& p : points) {
    if (p.size() != 1) throw DomainError("graph system points have one coordinate");
    flat.push_back(p[0]);
  }
  return graph_table_for(flat, horizon);
}

std::shared_ptr<GraphSystem> GraphSystem::power(std::size_t k, std::string name) const {
  if (k == 0) throw DomainError("power needs k >= 1");
  auto out = std::make_shared<GraphSystem>(std::move(name), f_, step_ * k);
  out->h_ = h_;
  out->h_inverse_ = h_inverse_;
  return out;
}

std::shared_ptr<GraphSystem> GraphSystem::conjugate(const PLMap& h, std::string name) const {
  if (!h.same_domain(f_)) throw DomainError("conjugator lives on a different graph");
  HomeoCertificate cert = require_homeomorphism(h);
  auto out = std::make_shared<GraphSystem>(std::move(name), f_, step_);
  out->h_ = h_ ? compose(h, *h_) : h;
  out->h_inverse_ = h_inverse_ ? compose(*h_inverse_, *cert.inverse) : *cert.inverse;
  return out;
}

std::shared_ptr<GraphSystem> make_graph_system(std::string name, const PLMap& f) {
  return std::make_shared<GraphSystem>(std::move(name), f);
}

// ---------------------------------------------------------------------------
// Products

ProductSystem::ProductSystem(SystemPtr first, SystemPtr second) : first_(std::move(first)), second_(std::move(second)) {
  if (!first_ || !second_) throw ConfigError("product needs two systems");
  if (first_->arity() == 0 || second_->arity() == 0)
    throw ConfigError("product factors must have fixed arity (no symmetric products inside prod)");
}

std::string ProductSystem::descriptor() const { return "prod(" + first_->descriptor() + "," + second_->descriptor() + ")"; }

std::pair<SystemPoint, SystemPoint> ProductSystem::split(const SystemPoint& p) const {
  if (p.size() != arity()) throw DomainError("product point has the wrong number of coordinates");
  const auto cut = p.begin() + static_cast<std::ptrdiff_t>(first_->arity());
  return {SystemPoint(p.begin(), cut), SystemPoint(cut, p.end())};
}

SystemPoint ProductSystem::apply(const SystemPoint& p) const {
  auto [a, b] = split(p);
  SystemPoint out = first_->apply(a);
  SystemPoint tail = second_->apply(b);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

double ProductSystem::distance(const SystemPoint& p, const SystemPoint& q) const {
  auto [pa, pb] = split(p);
  auto [qa, qb] = split(q);
  return std::max(first_->distance(pa, qa), second_->distance(pb, qb));
}

std::vector<SystemPoint> ProductSystem::sample(const Rational& mesh) const {
  const auto a = first_->sample(mesh);
  const auto b = second_->sample(mesh);
  std::vector<SystemPoint> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      SystemPoint p = x;
      p.insert(p.end(), y.begin(), y.end());
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::shared_ptr<const OrbitTable> ProductSystem::orbit_table(const NetRequest& request) const {
  NetRequest factor = request;
  std::vector<std::string> notes;
  for (int attempt = 0; attempt < 6; ++attempt, factor.mesh *= 2) {
    auto a = first_->orbit_table(factor);
    auto b = second_->orbit_table(factor);
    if (a->size() * b->size() > request.sample_budget) continue;
    auto out = std::make_shared<ProductOrbitTable>(a, b);
    out->mesh = std::max(a->mesh, b->mesh);
    for (const auto* t : {a.get(), b.get()}) out->notes.insert(out->notes.end(), t->notes.begin(), t->notes.end());
    if (attempt > 0) out->notes.push_back("product net coarsened to factor mesh " + to_string(factor.mesh));
    return out;
  }
  throw ResourceError("product sample exceeds the sample budget");
}

std::shared_ptr<const OrbitTable> ProductSystem::orbit_table_for(const std::vector<SystemPoint>& points,
                                                                 std::size_t horizon) const {
  std::vector<SystemPoint> left;
  std::vector<SystemPoint> right;
  std::map<SystemPoint, std::uint32_t> left_index;
  std::map<SystemPoint, std::uint32_t> right_index;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  auto intern = [](std::map<SystemPoint, std::uint32_t>& index, std::vector<SystemPoint>& list, SystemPoint p) {
    auto [it, inserted] = index.try_emplace(p, static_cast<std::uint32_t>(list.size()));
    if (inserted) list.push_back(std::move(p));
    return it->second;
  };
  for (const SystemPoint& p : points) {
    auto [a, b] = split(p);
    pairs.emplace_back(intern(left_index, left, std::move(a)), intern(right_index, right, std::move(b)));
  }
  return std::make_shared<ProductOrbitTable>(first_->orbit_table_for(left, horizon),
                                             second_->orbit_table_for(right, horizon), std::move(pairs));
}

ProductOrbitTable::ProductOrbitTable(std::shared_ptr<const OrbitTable> first, std::shared_ptr<const OrbitTable> second)
    : first_(std::move(first)), second_(std::move(second)) {
  if (first_->size() * second_->size() > UINT32_MAX) throw ResourceError("product table too large");
}

ProductOrbitTable::ProductOrbitTable(std::shared_ptr<const OrbitTable> first, std::shared_ptr<const OrbitTable> second,
                                     std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs)
    : first_(std::move(first)), second_(std::move(second)), pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw DomainError("explicit product table needs at least one point");
  for (std::size_t i = 0; i < pairs_.size(); ++i) pair_index_.try_emplace(pairs_[i], static_cast<std::uint32_t>(i));
}

std::pair<std::size_t, std::size_t> ProductOrbitTable::coords(std::size_t i) const {
  if (!pairs_.empty()) return {pairs_[i].first, pairs_[i].second};
  return {i / second_->size(), i % second_->size()};
}

double ProductOrbitTable::step_distance(std::size_t i, std::size_t j, std::size_t k) const {
  auto [i1, i2] = coords(i);
  auto [j1, j2] = coords(j);
  return std::max(first_->step_distance(i1, j1, k), second_->step_distance(i2, j2, k));
}

bool ProductOrbitTable::within(std::size_t i, std::size_t j, std::size_t n, double eps) const {
  auto [i1, i2] = coords(i);
  auto [j1, j2] = coords(j);
  return first_->within(i1, j1, n, eps) && second_->within(i2, j2, n, eps);
}

std::shared_ptr<const OrbitTable> ProductOrbitTable::restricted(std::size_t n) const {
  if (!pairs_.empty()) return nullptr;
  auto a = first_->restricted(n);
  auto b = second_->restricted(n);
  if (!a && !b) return nullptr;
  auto out = std::make_shared<ProductOrbitTable>(a ? a : first_, b ? b : second_);
  out->mesh = mesh;
  out->notes = notes;
  return out;
}

void ProductOrbitTable::candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const {
  auto [i1, i2] = coords(i);
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
  first_->candidates(i1, n, eps, a);
  second_->candidates(i2, n, eps, b);
  out.clear();
  if (pairs_.empty()) {
    const auto width = static_cast<std::uint32_t>(second_->size());
    out.reserve(a.size() * b.size());
    for (std::uint32_t x : a) {
      for (std::uint32_t y : b) out.push_back(x * width + y);
    }
    return;
  }
  for (std::uint32_t x : a) {
    for (std::uint32_t y : b) {
      if (auto it = pair_index_.find({x, y}); it != pair_index_.end()) out.push_back(it->second);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

}  // namespace polyent
