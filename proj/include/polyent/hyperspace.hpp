#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "polyent/estimation.hpp"
#include "polyent/systems.hpp"

namespace polyent {

// Nonempty finite subset of a metric graph: canonical points, sorted, no duplicates.
class FiniteSubset {
 public:
  FiniteSubset(const MetricGraph& g, std::vector<GraphPoint> points);

  const std::vector<GraphPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  friend bool operator==(const FiniteSubset& a, const FiniteSubset& b) { return a.points_ == b.points_; }

 private:
  std::vector<GraphPoint> points_;
};

std::string to_string(const FiniteSubset& a);

Rational hausdorff_distance_exact(const MetricGraph& g, const FiniteSubset& a, const FiniteSubset& b);
double hausdorff_distance(const MetricGraph& g, const FiniteSubset& a, const FiniteSubset& b);

// F_n(f): elementwise image. Collapses (two points with the same image) are
// legal and counted.
class InducedMap {
 public:
  InducedMap(PLMap f, std::size_t n);

  FiniteSubset operator()(const FiniteSubset& a) const;
  std::size_t cardinality_cap() const { return n_; }
  std::size_t collapses() const { return collapses_.load(); }
  const PLMap& base() const { return f_; }

 private:
  PLMap f_;
  std::size_t n_;
  mutable std::atomic<std::size_t> collapses_{0};
};

InducedMap induced_map(const PLMap& f, std::size_t n);

struct FactorCheck {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<std::vector<GraphPoint>> witness;
};

// pi_n o f^{xn} = F_n(f) o pi_n on each tuple, by exact equality.
FactorCheck factor_map_check(const PLMap& f, std::size_t n, const std::vector<std::vector<GraphPoint>>& tuples);

inline constexpr std::size_t kMaxSymmetricPower = 3;

// Orbit table over subsets of a base orbit table, each subset given by the
// indices of its elements. Distance is the Hausdorff distance at each time.
class SymmetricOrbitTable final : public OrbitTable {
 public:
  using Subset = std::vector<std::uint32_t>;

  SymmetricOrbitTable(std::shared_ptr<const GraphOrbitTable> base, std::size_t power, std::vector<Subset> subsets,
                      bool complete = false);

  std::size_t size() const override { return subsets_.size(); }
  std::size_t horizon() const override { return base_->horizon(); }
  double step_distance(std::size_t i, std::size_t j, std::size_t k) const override;
  bool within(std::size_t i, std::size_t j, std::size_t n, double eps) const override;
  void candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const override;
  // Only tables holding every subset of their base (as built by the system) restrict.
  std::shared_ptr<const OrbitTable> restricted(std::size_t n) const override;

  const GraphOrbitTable& base() const { return *base_; }
  const Subset& subset(std::size_t i) const { return subsets_[i]; }

 private:
  std::uint64_t key(const std::uint32_t* first, std::size_t count) const;
  bool covered(const Subset& a, const Subset& b, std::size_t k, double eps) const;

  std::shared_ptr<const GraphOrbitTable> base_;
  std::size_t power_;
  std::vector<Subset> subsets_;
  bool complete_;
  std::unordered_map<std::uint64_t, std::uint32_t> lookup_;
};

// All subsets of {0..count-1} with 1..power elements, lexicographic with a
// prefix before its extensions.
std::vector<SymmetricOrbitTable::Subset> enumerate_subsets(std::size_t count, std::size_t power);
std::size_t subset_count(std::size_t count, std::size_t power);

// (F_n(X), d_H, F_n(f)) for a graph system.
class SymmetricProductSystem final : public MetricSystem {
 public:
  SymmetricProductSystem(std::shared_ptr<const GraphSystem> base, std::size_t power);

  std::string descriptor() const override;
  std::size_t arity() const override { return 0; }
  SystemPoint apply(const SystemPoint& p) const override;
  double distance(const SystemPoint& p, const SystemPoint& q) const override;
  std::vector<SystemPoint> sample(const Rational& mesh) const override;
  std::shared_ptr<const OrbitTable> orbit_table(const NetRequest& request) const override;
  std::shared_ptr<const OrbitTable> orbit_table_for(const std::vector<SystemPoint>& points,
                                                    std::size_t horizon) const override;

  const GraphSystem& base() const { return *base_; }
  const std::shared_ptr<const GraphSystem>& base_system() const { return base_; }
  std::size_t power() const { return power_; }

 private:
  FiniteSubset as_subset(const SystemPoint& p) const;

  std::shared_ptr<const GraphSystem> base_;
  std::size_t power_;
};

std::shared_ptr<SymmetricProductSystem> symmetric_product_system(std::shared_ptr<const GraphSystem> base,
                                                                 std::size_t power);

struct TrendRow {
  std::size_t power = 0;
  GrowthReport report;
};

struct HyperspaceTrend {
  std::vector<TrendRow> rows;  // power 1..n_max
  double min_step = 0.0;       // smallest exponent increase between consecutive powers
  bool increasing = false;     // every step at least the required increase
  // Finite evidence only: the hyperspace exponent is the supremum over all n.
  std::string note;
};

// Exponents of F_1(f), ..., F_{n_max}(f) under one protocol.
HyperspaceTrend hyperspace_growth_trend(std::shared_ptr<const GraphSystem> base, std::size_t n_max,
                                        const EstimationProtocol& protocol, double required_step = 0.6);

}  // namespace polyent
