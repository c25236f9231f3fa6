#include <algorithm>
#include <limits>

#include "polyent/errors.hpp"
#include "polyent/hyperspace.hpp"

namespace polyent {

FiniteSubset::FiniteSubset(const MetricGraph& g, std::vector<GraphPoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw DomainError("finite subsets are nonempty");
  for (GraphPoint& p : points_) p = g.canonical(p);
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

std::string to_string(const FiniteSubset& a) {
  std::string out = "{";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a.points()[i]);
  }
  return out + "}";
}

namespace {

template <typename T, typename Dist>
T max_min(const std::vector<GraphPoint>& from, const std::vector<GraphPoint>& to, Dist&& dist) {
  T worst = 0;
  for (const GraphPoint& a : from) {
    T best = dist(a, to.front());
    for (std::size_t i = 1; i < to.size(); ++i) {
      T d = dist(a, to[i]);
      if (d < best) best = d;
    }
    if (best > worst) worst = best;
  }
  return worst;
}

}  // namespace

Rational hausdorff_distance_exact(const MetricGraph& g, const FiniteSubset& a, const FiniteSubset& b) {
  auto dist = [&](const GraphPoint& x, const GraphPoint& y) { return g.distance_exact(x, y); };
  const Rational ab = max_min<Rational>(a.points(), b.points(), dist);
  const Rational ba = max_min<Rational>(b.points(), a.points(), dist);
  return ab > ba ? ab : ba;
}

double hausdorff_distance(const MetricGraph& g, const FiniteSubset& a, const FiniteSubset& b) {
  return to_double(hausdorff_distance_exact(g, a, b));
}

InducedMap::InducedMap(PLMap f, std::size_t n) : f_(std::move(f)), n_(n) {
  if (n_ == 0) throw DomainError("F_n needs n >= 1");
}

FiniteSubset InducedMap::operator()(const FiniteSubset& a) const {
  if (a.size() > n_) throw DomainError("subset has more than n points");
  std::vector<GraphPoint> image;
  image.reserve(a.size());
  for (const GraphPoint& p : a.points()) image.push_back(f_.apply(p));
  FiniteSubset out(f_.domain(), std::move(image));
  if (out.size() < a.size()) collapses_ += a.size() - out.size();
  return out;
}

InducedMap induced_map(const PLMap& f, std::size_t n) { return InducedMap(f, n); }

FactorCheck factor_map_check(const PLMap& f, std::size_t n, const std::vector<std::vector<GraphPoint>>& tuples) {
  const InducedMap induced(f, n);
  FactorCheck out;
  for (const auto& tuple : tuples) {
    if (tuple.size() != n) throw DomainError("factor check tuples must have n coordinates");
    std::vector<GraphPoint> upstairs;
    upstairs.reserve(n);
    for (const GraphPoint& p : tuple) upstairs.push_back(f.apply(p));
    const FiniteSubset left(f.domain(), std::move(upstairs));
    const FiniteSubset right = induced(FiniteSubset(f.domain(), tuple));
    ++out.checked;
    if (!(left == right)) {
      out.holds = false;
      out.witness = tuple;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t subset_count(std::size_t count, std::size_t power) {
  std::size_t total = 0;
  std::size_t binom = 1;
  for (std::size_t k = 1; k <= power && k <= count; ++k) {
    binom = binom * (count - k + 1) / k;
    total += binom;
  }
  return total;
}

std::vector<SymmetricOrbitTable::Subset> enumerate_subsets(std::size_t count, std::size_t power) {
  std::vector<SymmetricOrbitTable::Subset> out;
  out.reserve(subset_count(count, power));
  SymmetricOrbitTable::Subset current;
  auto extend = [&](auto&& self, std::uint32_t from) -> void {
    for (std::uint32_t e = from; e < count; ++e) {
      current.push_back(e);
      out.push_back(current);
      if (current.size() < power) self(self, e + 1);
      current.pop_back();
    }
  };
  extend(extend, 0);
  return out;
}

SymmetricOrbitTable::SymmetricOrbitTable(std::shared_ptr<const GraphOrbitTable> base, std::size_t power,
                                         std::vector<Subset> subsets, bool complete)
    : base_(std::move(base)), power_(power), subsets_(std::move(subsets)), complete_(complete) {
  if (power_ == 0 || power_ > kMaxSymmetricPower) throw DomainError("symmetric power must be 1..3");
  if (subsets_.size() > UINT32_MAX) throw ResourceError("symmetric table too large");
  lookup_.reserve(subsets_.size());
  for (std::size_t i = 0; i < subsets_.size(); ++i) {
    const Subset& s = subsets_[i];
    if (s.empty() || s.size() > power_ || !std::is_sorted(s.begin(), s.end()) ||
        std::adjacent_find(s.begin(), s.end()) != s.end() || s.back() >= base_->size())
      throw DomainError("malformed subset in symmetric table");
    lookup_.try_emplace(key(s.data(), s.size()), static_cast<std::uint32_t>(i));
  }
}

std::shared_ptr<const OrbitTable> SymmetricOrbitTable::restricted(std::size_t n) const {
  if (!complete_) return nullptr;
  auto base = base_->restricted_graph(n);
  if (!base) return nullptr;
  auto out = std::make_shared<SymmetricOrbitTable>(base, power_, enumerate_subsets(base->size(), power_), true);
  out->mesh = mesh;
  out->notes = notes;
  return out;
}

std::uint64_t SymmetricOrbitTable::key(const std::uint32_t* first, std::size_t count) const {
  const std::uint64_t radix = base_->size() + 1;
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < count; ++i) k = k * radix + (first[i] + 1);
  return k;
}

bool SymmetricOrbitTable::covered(const Subset& a, const Subset& b, std::size_t k, double eps) const {
  const MetricGraph& g = base_->graph();
  for (std::uint32_t x : a) {
    bool near = false;
    for (std::uint32_t y : b) {
      if (g.distance(base_->at(x, k), base_->at(y, k)) < eps) {
        near = true;
        break;
      }
    }
    if (!near) return false;
  }
  return true;
}

double SymmetricOrbitTable::step_distance(std::size_t i, std::size_t j, std::size_t k) const {
  const MetricGraph& g = base_->graph();
  auto directed = [&](const Subset& a, const Subset& b) {
    double worst = 0.0;
    for (std::uint32_t x : a) {
      double best = g.distance(base_->at(x, k), base_->at(b.front(), k));
      for (std::size_t m = 1; m < b.size(); ++m) best = std::min(best, g.distance(base_->at(x, k), base_->at(b[m], k)));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(subsets_[i], subsets_[j]), directed(subsets_[j], subsets_[i]));
}

bool SymmetricOrbitTable::within(std::size_t i, std::size_t j, std::size_t n, double eps) const {
  const Subset& a = subsets_[i];
  const Subset& b = subsets_[j];
  for (std::size_t k = 0; k < n; ++k) {
    if (!covered(a, b, k, eps) || !covered(b, a, k, eps)) return false;
  }
  return true;
}

void SymmetricOrbitTable::candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const {
  out.clear();
  const Subset& a = subsets_[i];
  const MetricGraph& g = base_->graph();
  const std::size_t probes = base_->probes_below(std::min(n, horizon()));
  std::size_t best = 0;
  std::size_t best_bound = SIZE_MAX;
  for (std::size_t p = 0; p < probes; ++p) {
    std::size_t bound = 0;
    for (std::uint32_t x : a) bound += base_->neighbour_bound(base_->at(x, base_->probe_time(p)), p, eps);
    if (bound < best_bound) {
      best_bound = bound;
      best = p;
    }
  }
  // Elements of a subset within eps of A must each lie within eps of A at every time.
  std::vector<std::uint32_t> atoms;
  for (std::uint32_t x : a) base_->neighbours_at(base_->at(x, base_->probe_time(best)), best, eps, atoms);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::erase_if(atoms, [&](std::uint32_t y) {
    for (std::size_t p = 0; p < probes; ++p) {
      if (p == best) continue;
      const std::size_t k = base_->probe_time(p);
      bool near = false;
      for (std::uint32_t x : a) {
        if (g.distance(base_->at(x, k), base_->at(y, k)) < eps) {
          near = true;
          break;
        }
      }
      if (!near) return true;
    }
    return false;
  });
  // B must also come within eps of every element of A at every time. Build B
  // by picking, for the first element of A not yet matched, one of its
  // neighbours at that element's most selective probe; once A is matched, pad
  // with any remaining atoms.
  auto close_at = [&](std::size_t k, std::uint32_t x, std::uint32_t y) {
    return g.distance(base_->at(x, k), base_->at(y, k)) < eps;
  };
  std::vector<std::size_t> own_probe(a.size(), best);
  std::vector<std::vector<std::uint32_t>> near(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    std::size_t bound = SIZE_MAX;
    for (std::size_t p = 0; p < probes; ++p) {
      const std::size_t b = base_->neighbour_bound(base_->at(a[m], base_->probe_time(p)), p, eps);
      if (b < bound) {
        bound = b;
        own_probe[m] = p;
      }
    }
    const std::size_t k = base_->probe_time(own_probe[m]);
    for (std::uint32_t y : atoms) {
      if (close_at(k, a[m], y)) near[m].push_back(y);
    }
  }
  auto close = [&](std::size_t m, std::uint32_t y) { return close_at(base_->probe_time(own_probe[m]), a[m], y); };
  std::uint32_t chosen[kMaxSymmetricPower];
  std::uint32_t sorted[kMaxSymmetricPower];
  auto taken = [&](std::uint32_t y, std::size_t depth) { return std::find(chosen, chosen + depth, y) != chosen + depth; };
  // pad_from: depth of the first padding atom (padding is kept increasing).
  auto grow = [&](auto&& self, std::size_t depth, std::size_t pad_from) -> void {
    std::size_t open = a.size();
    for (std::size_t m = 0; m < a.size() && open == a.size(); ++m) {
      if (std::none_of(chosen, chosen + depth, [&](std::uint32_t y) { return close(m, y); })) open = m;
    }
    if (open == a.size()) {
      std::copy(chosen, chosen + depth, sorted);
      std::sort(sorted, sorted + depth);
      if (auto it = lookup_.find(key(sorted, depth)); it != lookup_.end()) out.push_back(it->second);
    }
    if (depth >= power_ || depth >= kMaxSymmetricPower) return;
    const bool padding = open == a.size();
    const std::vector<std::uint32_t>& pool = padding ? atoms : near[open];
    for (std::uint32_t y : pool) {
      if (taken(y, depth)) continue;
      if (padding && depth > pad_from && y < chosen[depth - 1]) continue;
      chosen[depth] = y;
      self(self, depth + 1, padding ? std::min(pad_from, depth) : pad_from);
    }
  };
  grow(grow, 0, SIZE_MAX);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

// ---------------------------------------------------------------------------

SymmetricProductSystem::SymmetricProductSystem(std::shared_ptr<const GraphSystem> base, std::size_t power)
    : base_(std::move(base)), power_(power) {
  if (!base_) throw ConfigError("symmetric product needs a base system");
  if (power_ == 0 || power_ > kMaxSymmetricPower) throw ConfigError("symmetric power must be 1..3");
}

std::string SymmetricProductSystem::descriptor() const {
  return "F" + std::to_string(power_) + "(" + base_->descriptor() + ")";
}

FiniteSubset SymmetricProductSystem::as_subset(const SystemPoint& p) const {
  FiniteSubset a(base_->graph(), p);
  if (a.size() > power_) throw DomainError("subset has more than n points");
  return a;
}

SystemPoint SymmetricProductSystem::apply(const SystemPoint& p) const {
  const FiniteSubset a = as_subset(p);
  std::vector<GraphPoint> image;
  for (const GraphPoint& x : a.points()) image.push_back(base_->apply_point(x));
  return FiniteSubset(base_->graph(), std::move(image)).points();
}

double SymmetricProductSystem::distance(const SystemPoint& p, const SystemPoint& q) const {
  return hausdorff_distance(base_->graph(), as_subset(p), as_subset(q));
}

std::vector<SystemPoint> SymmetricProductSystem::sample(const Rational& mesh) const {
  const auto grid = base_->graph().sample_grid(mesh);
  std::vector<SystemPoint> out;
  for (const auto& s : enumerate_subsets(grid.size(), power_)) {
    SystemPoint p;
    for (std::uint32_t e : s) p.push_back(grid[e]);
    out.push_back(std::move(p));
  }
  return out;
}

std::shared_ptr<const OrbitTable> SymmetricProductSystem::orbit_table(const NetRequest& request) const {
  NetRequest base_request = request;
  for (int attempt = 0; attempt < 6; ++attempt, base_request.mesh *= 2) {
    auto base = base_->graph_table(base_request);
    if (subset_count(base->size(), power_) > request.sample_budget) continue;
    auto out = std::make_shared<SymmetricOrbitTable>(base, power_, enumerate_subsets(base->size(), power_), true);
    out->mesh = base->mesh;
    out->notes = base->notes;
    if (attempt > 0) out->notes.push_back("symmetric-product base coarsened to mesh " + to_string(base_request.mesh));
    return out;
  }
  throw ResourceError("symmetric-product sample exceeds the sample budget");
}

std::shared_ptr<const OrbitTable> SymmetricProductSystem::orbit_table_for(const std::vector<SystemPoint>& points,
                                                                          std::size_t horizon) const {
  std::vector<FiniteSubset> subsets;
  std::vector<GraphPoint> atoms;
  for (const SystemPoint& p : points) {
    subsets.push_back(as_subset(p));
    atoms.insert(atoms.end(), subsets.back().points().begin(), subsets.back().points().end());
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  std::vector<SymmetricOrbitTable::Subset> indexed;
  for (const FiniteSubset& s : subsets) {
    SymmetricOrbitTable::Subset idx;
    for (const GraphPoint& x : s.points())
      idx.push_back(static_cast<std::uint32_t>(std::lower_bound(atoms.begin(), atoms.end(), x) - atoms.begin()));
    indexed.push_back(std::move(idx));
  }
  return std::make_shared<SymmetricOrbitTable>(base_->graph_table_for(atoms, horizon), power_, std::move(indexed));
}

std::shared_ptr<SymmetricProductSystem> symmetric_product_system(std::shared_ptr<const GraphSystem> base,
                                                                 std::size_t power) {
  return std::make_shared<SymmetricProductSystem>(std::move(base), power);
}

HyperspaceTrend hyperspace_growth_trend(std::shared_ptr<const GraphSystem> base, std::size_t n_max,
                                        const EstimationProtocol& protocol, double required_step) {
  if (n_max == 0 || n_max > kMaxSymmetricPower) throw ConfigError("trend power must be 1..3");
  HyperspaceTrend out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const SymmetricProductSystem system(base, n);
    out.rows.push_back(TrendRow{n, growth_exponent(system, protocol)});
  }
  out.min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    out.min_step = std::min(out.min_step, out.rows[i].report.exponent - out.rows[i - 1].report.exponent);
  }
  if (out.rows.size() < 2) out.min_step = 0.0;
  out.increasing = out.rows.size() >= 2 && out.min_step >= required_step;
  out.note = "finite trend up to n=" + std::to_string(n_max) + "; the full hyperspace exponent is a supremum over n";
  return out;
}

}  // namespace polyent
