#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "polyent/phase_space.hpp"

namespace polyent {

// Point of a MetricSystem. A graph system uses one coordinate, a product
// concatenates its factors, a symmetric product stores a sorted set.
using SystemPoint = std::vector<GraphPoint>;

std::string to_string(const SystemPoint& p);

// Finite orbit segments of a finite sample, with what the estimation kernels
// need: the dynamic distance and a candidate generator for it.
class OrbitTable {
 public:
  virtual ~OrbitTable() = default;

  virtual std::size_t size() const = 0;
  virtual std::size_t horizon() const = 0;

  // d(f^k x_i, f^k x_j), k < horizon().
  virtual double step_distance(std::size_t i, std::size_t j, std::size_t k) const = 0;

  // d_n(x_i, x_j) < eps, with early exit.
  virtual bool within(std::size_t i, std::size_t j, std::size_t n, double eps) const;

  // Every j with d_n(x_i, x_j) < eps is appended (i included); other indices
  // may appear too. Output is sorted and duplicate-free.
  virtual void candidates(std::size_t i, std::size_t n, double eps, std::vector<std::uint32_t>& out) const = 0;

  double dynamic_distance(std::size_t i, std::size_t j, std::size_t n) const;

  // The sub-sample that refinement for horizon n alone would have produced,
  // truncated to horizon n; nullptr when that is the whole table.
  virtual std::shared_ptr<const OrbitTable> restricted(std::size_t n) const = 0;

  // Set when the sample had to be coarsened or could not be refined.
  std::vector<std::string> notes;
  // Mesh actually used to build the sample.
  double mesh = 0.0;
};

struct NetRequest {
  Rational mesh;
  std::size_t horizon = 1;
  std::size_t sample_budget = 3'000'000;
  std::size_t orbit_budget = 25'000'000;
  // Refine the base grid until neighbouring samples stay within `mesh` in the
  // dynamic metric d_horizon, so the sample is a mesh-net for d_n, not only d.
  bool refine = true;
};

// Abstract dynamical system (X, d, f) restricted to what can be computed:
// exact action, metric, finite samples and orbit tables.
class MetricSystem {
 public:
  virtual ~MetricSystem() = default;

  virtual std::string descriptor() const = 0;
  // Coordinates per point; 0 when variable (symmetric products).
  virtual std::size_t arity() const = 0;
  virtual SystemPoint apply(const SystemPoint& p) const = 0;
  virtual double distance(const SystemPoint& p, const SystemPoint& q) const = 0;
  virtual std::vector<SystemPoint> sample(const Rational& mesh) const = 0;

  virtual std::shared_ptr<const OrbitTable> orbit_table(const NetRequest& request) const = 0;
  virtual std::shared_ptr<const OrbitTable> orbit_table_for(const std::vector<SystemPoint>& points,
                                                            std::size_t horizon) const = 0;
};

using SystemPtr = std::shared_ptr<const MetricSystem>;

// Table to count on at horizon n: the restriction, or the table itself.
std::shared_ptr<const OrbitTable> table_for_horizon(const std::shared_ptr<const OrbitTable>& table, std::size_t n);

}  // namespace polyent
