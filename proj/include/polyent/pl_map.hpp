#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polyent/phase_space.hpp"

namespace polyent {

inline constexpr std::size_t kDefaultPieceCap = 1'000'000;

// Affine piece of a PL map: the domain interval [start, end] of the owning
// edge is sent into `target` by t -> slope * t + offset.
struct Piece {
  Rational start;
  Rational end;
  EdgeId target = 0;
  Rational slope;
  Rational offset;

  Rational image_of(const Rational& t) const { return slope * t + offset; }
  bool flat() const { return slope == 0; }
};

// Exact piecewise-linear self-map of a metric graph. Immutable; cheap to copy
// (the graph is shared).
class PLMap {
 public:
  // Structural validation only: per edge the pieces cover [0,1] contiguously
  // and every image lies inside its target edge. Continuity is reported by
  // validate_map, not enforced here.
  PLMap(std::shared_ptr<const MetricGraph> graph, std::vector<std::vector<Piece>> pieces);

  static PLMap identity(std::shared_ptr<const MetricGraph> graph);

  const MetricGraph& domain() const { return *graph_; }
  const std::shared_ptr<const MetricGraph>& graph() const { return graph_; }
  const std::vector<Piece>& pieces(EdgeId e) const { return pieces_.at(e); }
  std::size_t piece_count() const;

  // Index of a piece containing t on edge e (the left one at interior breakpoints).
  std::size_t piece_index(EdgeId e, const Rational& t) const;

  GraphPoint apply(const GraphPoint& p) const;

  bool same_domain(const PLMap& other) const;

 private:
  std::shared_ptr<const MetricGraph> graph_;
  std::vector<std::vector<Piece>> pieces_;
};

struct HomeoCertificate {
  // +1 / -1 per piece, indexed like PLMap::pieces.
  std::vector<std::vector<int>> orientation;
  bool bijective = false;
  std::optional<PLMap> inverse;
};

struct ValidityReport {
  bool continuous = true;
  bool has_flat_pieces = false;
  bool homeomorphism = false;
  std::vector<std::string> violations;
  std::optional<HomeoCertificate> certificate;
};

ValidityReport validate_map(const PLMap& f);

// Throws NotHomeomorphismError when f is not a certified homeomorphism.
HomeoCertificate require_homeomorphism(const PLMap& f);

// f after g.
PLMap compose(const PLMap& f, const PLMap& g, std::size_t piece_cap = kDefaultPieceCap);

PLMap iterate(const PLMap& f, std::size_t n, std::size_t piece_cap = kDefaultPieceCap);

// Number of maximal intervals of monotonicity of f^n on an interval domain.
// A flat piece is one interval and breaks monotone runs.
std::uint64_t lap_number(const PLMap& f, std::size_t n);

// Same count read off the explicit composition f^n; independent of the
// recursion used by lap_number.
std::uint64_t lap_number_by_composition(const PLMap& f, std::size_t n, std::size_t piece_cap = kDefaultPieceCap);

// Monotone runs of a single explicit interval map.
std::uint64_t monotone_run_count(const PLMap& f);

// sup over x of the number of connected components of (f^n)^{-1}(x).
std::uint64_t phi(const PLMap& f, std::size_t n, std::size_t piece_cap = kDefaultPieceCap);

// Number of connected components of g^{-1}(x).
std::uint64_t preimage_components(const PLMap& g, const GraphPoint& x);

struct FixedSegment {
  EdgeId edge;
  Rational start;
  Rational end;
};

struct FixedSet {
  std::vector<GraphPoint> points;  // isolated, canonical
  std::vector<FixedSegment> segments;  // maximal per edge

  bool contains(const MetricGraph& g, const GraphPoint& p) const;
  bool empty() const { return points.empty() && segments.empty(); }
};

FixedSet fixed_points(const PLMap& f);
FixedSet periodic_points(const PLMap& f, std::size_t k, std::size_t piece_cap = kDefaultPieceCap);

enum class Wandering { wandering, nonwandering, probe_nonrecurrent };

const char* to_string(Wandering w);

struct WanderingProbe {
  std::size_t horizon = 10'000;
  double radius = 1e-2;
  std::uint64_t seed = 1;
  std::size_t ball_samples = 16;
};

struct WanderingVerdict {
  Wandering status;
  bool exact;
  std::string method;
};

WanderingVerdict wandering_status(const PLMap& f, const HomeoCertificate& certificate, const GraphPoint& p,
                                  const WanderingProbe& probe = {});

}  // namespace polyent
