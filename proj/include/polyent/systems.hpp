#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "polyent/metric_system.hpp"
#include "polyent/pl_map.hpp"

namespace polyent {

// Orbit table over points of a single metric graph. Orbits are stored row
// major (point, time); per-time spatial indexes at times 0, 1, 3, 7, ...
// drive candidate generation.
class GraphOrbitTable final : public OrbitTable {
 public:
  // levels[i]: smallest horizon whose refinement contains point i (empty: all 1).
  GraphOrbitTable(std::shared_ptr<const MetricGraph> graph, std::vector<GraphPoint> points, std::size_t horizon,
                  std::vector<NumericPoint> orbits, std::vector<std::uint32_t> levels = {});

  std::size_t size() const override { return points_.size(); }
  std::size_t horizon() const override { return horizon_; }
  double step_distance(std::size_t i, std::size_t j, std::size_t k) const override {
    return graph_->distance(orbits_[i * horizon_ + k], orbits_[j * horizon_ + k]);
  }
  bool within(std::size_t i, std::size_t j, std::size_t n, double eps) const override;
  void candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const override;
  std::shared_ptr<const OrbitTable> restricted(std::size_t n) const override { return restricted_graph(n); }
  std::shared_ptr<const GraphOrbitTable> restricted_graph(std::size_t n) const;

  const MetricGraph& graph() const { return *graph_; }
  std::uint32_t level(std::size_t i) const { return levels_[i]; }
  const std::vector<GraphPoint>& points() const { return points_; }
  const NumericPoint& at(std::size_t i, std::size_t k) const { return orbits_[i * horizon_ + k]; }

  // Indices j whose time-k position lies within `radius` of point `centre`
  // (given as a time-k position), appended to out unsorted. Exact filter.
  void neighbours_at(const NumericPoint& centre, std::size_t probe, double radius, std::vector<std::uint32_t>& out) const;
  // Upper bound on neighbours_at's output size; cheap.
  std::size_t neighbour_bound(const NumericPoint& centre, std::size_t probe, double radius) const;
  // Probe slots usable for dynamic distances d_n.
  std::size_t probes_below(std::size_t n) const;
  std::size_t probe_time(std::size_t probe) const { return probe_times_[probe]; }

 private:
  struct Entry {
    double t;
    std::uint32_t index;
  };
  template <typename Visit>
  void visit_ranges(const NumericPoint& centre, std::size_t probe, double radius, Visit&& visit) const;

  std::shared_ptr<const MetricGraph> graph_;
  std::vector<GraphPoint> points_;
  std::size_t horizon_;
  std::vector<NumericPoint> orbits_;
  std::vector<std::uint32_t> levels_;
  std::vector<std::size_t> probe_times_;
  // [probe][edge] -> entries sorted by t
  std::vector<std::vector<std::vector<Entry>>> index_;
};

// (X, f) for a PL map on a metric graph, optionally as a power f^step and/or
// conjugated by a PL homeomorphism h (acting as h o f o h^-1).
class GraphSystem final : public MetricSystem {
 public:
  GraphSystem(std::string name, PLMap f, std::size_t step = 1);

  std::string descriptor() const override { return name_; }
  std::size_t arity() const override { return 1; }
  SystemPoint apply(const SystemPoint& p) const override;
  double distance(const SystemPoint& p, const SystemPoint& q) const override;
  std::vector<SystemPoint> sample(const Rational& mesh) const override;
  std::shared_ptr<const OrbitTable> orbit_table(const NetRequest& request) const override;
  std::shared_ptr<const OrbitTable> orbit_table_for(const std::vector<SystemPoint>& points,
                                                    std::size_t horizon) const override;

  std::shared_ptr<const GraphOrbitTable> graph_table(const NetRequest& request) const;
  std::shared_ptr<const GraphOrbitTable> graph_table_for(const std::vector<GraphPoint>& points, std::size_t horizon) const;

  const PLMap& map() const { return f_; }
  std::size_t step() const { return step_; }
  const std::optional<PLMap>& conjugator() const { return h_; }
  const MetricGraph& graph() const { return f_.domain(); }
  // The system map as one PLMap: h o f^step o h^-1.
  PLMap system_map() const;

  GraphPoint apply_point(const GraphPoint& p) const;
  // x, F(x), ..., F^{horizon-1}(x) for the system map F, exact then rounded.
  std::vector<NumericPoint> orbit(const GraphPoint& p, std::size_t horizon) const;

  std::shared_ptr<GraphSystem> power(std::size_t k, std::string name) const;
  std::shared_ptr<GraphSystem> conjugate(const PLMap& h, std::string name) const;

 private:
  std::shared_ptr<const GraphOrbitTable> build_table(std::vector<GraphPoint> points, std::size_t horizon,
                                                     std::vector<std::uint32_t> levels = {}) const;
  std::shared_ptr<const GraphOrbitTable> refine(const Rational& mesh, const NetRequest& request) const;
  const std::vector<NumericPoint>& cached_orbit(const GraphPoint& p, std::size_t horizon) const;
  void fill_cache(const std::vector<GraphPoint>& points, std::size_t horizon) const;

  std::string name_;
  PLMap f_;
  std::size_t step_;
  std::optional<PLMap> h_;
  std::optional<PLMap> h_inverse_;

  mutable std::mutex cache_mutex_;
  mutable std::map<GraphPoint, std::vector<NumericPoint>> cache_;
};

// f x g with the max metric.
class ProductSystem final : public MetricSystem {
 public:
  ProductSystem(SystemPtr first, SystemPtr second);

  std::string descriptor() const override;
  std::size_t arity() const override { return first_->arity() + second_->arity(); }
  SystemPoint apply(const SystemPoint& p) const override;
  double distance(const SystemPoint& p, const SystemPoint& q) const override;
  std::vector<SystemPoint> sample(const Rational& mesh) const override;
  std::shared_ptr<const OrbitTable> orbit_table(const NetRequest& request) const override;
  std::shared_ptr<const OrbitTable> orbit_table_for(const std::vector<SystemPoint>& points,
                                                    std::size_t horizon) const override;

  const SystemPtr& first() const { return first_; }
  const SystemPtr& second() const { return second_; }

 private:
  std::pair<SystemPoint, SystemPoint> split(const SystemPoint& p) const;

  SystemPtr first_;
  SystemPtr second_;
};

class ProductOrbitTable final : public OrbitTable {
 public:
  ProductOrbitTable(std::shared_ptr<const OrbitTable> first, std::shared_ptr<const OrbitTable> second);
  // Explicit list of index pairs instead of the full Cartesian product.
  ProductOrbitTable(std::shared_ptr<const OrbitTable> first, std::shared_ptr<const OrbitTable> second,
                    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs);

  std::size_t size() const override { return pairs_.empty() ? first_->size() * second_->size() : pairs_.size(); }
  std::size_t horizon() const override { return std::min(first_->horizon(), second_->horizon()); }
  double step_distance(std::size_t i, std::size_t j, std::size_t k) const override;
  bool within(std::size_t i, std::size_t j, std::size_t n, double eps) const override;
  void candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const override;
  std::shared_ptr<const OrbitTable> restricted(std::size_t n) const override;

 private:
  std::pair<std::size_t, std::size_t> coords(std::size_t i) const;

  std::shared_ptr<const OrbitTable> first_;
  std::shared_ptr<const OrbitTable> second_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> pair_index_;
};

// Build a system from a PL map; shorthand used by the catalog and tests.
std::shared_ptr<GraphSystem> make_graph_system(std::string name, const PLMap& f);

}  // namespace polyent
