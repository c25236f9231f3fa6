#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polyent/metric_system.hpp"
#include "polyent/pl_map.hpp"

namespace polyent {

enum class KernelChoice { indexed, reference };

struct EstimationProtocol {
  // eps = 2^-k for k in eps_exponents, n = 2^j for j in n_exponents.
  std::vector<int> eps_exponents{3, 4, 5, 6, 7};
  std::vector<int> n_exponents{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  Rational mesh_factor{1, 4};
  // Inclusive j-range of the regression; default is the upper half.
  std::optional<std::pair<int, int>> window;
  double tolerance = 0.15;
  std::size_t sample_budget = 3'000'000;
  std::size_t orbit_budget = 25'000'000;
  bool refine = true;
  // Greedy spanning counts need every d_n-ball; off, the span column is empty.
  bool spanning = true;
  KernelChoice kernel = KernelChoice::indexed;

  void validate() const;  // throws ConfigError
  std::pair<int, int> regression_window() const;
  std::size_t max_n() const;
};

struct CountRow {
  double eps;
  std::size_t n;
  // Largest greedy separated set over n' <= n (still an (n, eps)-separated set).
  std::size_t sep;
  // Size of the greedy separated set at n itself.
  std::size_t sep_at_n;
  std::optional<std::size_t> span;
  // Points of the d_n-net the counts were taken on.
  std::size_t sample_size;
};

struct SlopeFit {
  double eps = 0.0;
  double slope = 0.0;
  double residual = 0.0;
  std::size_t points = 0;
  bool degenerate = false;
  double mesh = 0.0;
  std::size_t sample_size = 0;
  std::vector<std::string> notes;
};

struct GrowthReport {
  std::string system;
  std::pair<int, int> window;
  std::vector<SlopeFit> fits;  // one per eps, decreasing eps
  double exponent = 0.0;       // max slope over the two smallest eps
  std::vector<CountRow> counts;
  std::vector<std::string> flags;
};

GrowthReport growth_exponent(const MetricSystem& system, const EstimationProtocol& protocol);

// Least-squares slope of y against x and the RMS residual.
std::pair<double, double> least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// CSV with header system,eps,n,sep_greedy,span_greedy; eps printed with %.17g,
// an uncomputed span left empty.
void write_counts_csv(std::ostream& out, const std::vector<GrowthReport>& reports);

struct PhiSample {
  std::size_t n;
  std::uint64_t value;
};

struct KatoReport {
  double exponent_estimate = 0.0;
  std::vector<PhiSample> phi;
  double phi_slope = 0.0;
  double bound = 1.0;
  bool bound_infinite = false;
  bool satisfied = false;
};

// Upper bound 1 + max over the regression window of log phi(f,n) / log n,
// compared with an exponent estimate. Piece-cap overflow makes the bound +inf.
KatoReport kato_bound_check(const PLMap& f, double exponent_estimate, const EstimationProtocol& protocol);
KatoReport kato_bound_check(const PLMap& f, const EstimationProtocol& protocol);

struct LapReport {
  std::size_t n = 0;
  std::optional<std::uint64_t> laps;  // empty when c_n overflowed
  double bound = 1.0;
  double exponent_estimate = 0.0;
  bool satisfied = false;
};

// 1 + log c_n / log n at the given n (the protocol's largest n when n == 0).
LapReport lap_bound_check(const PLMap& f, std::size_t n, double exponent_estimate, const EstimationProtocol& protocol);
LapReport lap_bound_check(const PLMap& f, std::size_t n, const EstimationProtocol& protocol);

}  // namespace polyent
