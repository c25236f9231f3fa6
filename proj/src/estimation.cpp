#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "polyent/errors.hpp"
#include "polyent/estimation.hpp"
#include "polyent/kernels.hpp"
#include "polyent/systems.hpp"

namespace polyent {

void EstimationProtocol::validate() const {
  if (eps_exponents.empty()) throw ConfigError("protocol needs at least one eps");
  if (n_exponents.empty()) throw ConfigError("protocol needs at least one n");
  for (int k : eps_exponents) {
    if (k < 0 || k > 40) throw ConfigError("eps exponent out of range 0..40");
  }
  for (std::size_t i = 0; i < n_exponents.size(); ++i) {
    if (n_exponents[i] < 0 || n_exponents[i] > 20) throw ConfigError("n exponent out of range 0..20");
    if (i > 0 && n_exponents[i] <= n_exponents[i - 1]) throw ConfigError("n exponents must be increasing");
  }
  if (mesh_factor <= 0 || mesh_factor > Rational(1, 2)) throw ConfigError("mesh factor must lie in (0, 1/2]");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance must be nonnegative");
  const auto [lo, hi] = regression_window();
  if (lo > hi) throw ConfigError("empty regression window");
  std::size_t inside = 0;
  for (int j : n_exponents) inside += (j >= lo && j <= hi) ? 1 : 0;
  if (inside < 4) throw ConfigError("regression window needs at least 4 values of n");
  if (sample_budget == 0 || orbit_budget == 0) throw ConfigError("budgets must be positive");
}

std::pair<int, int> EstimationProtocol::regression_window() const {
  if (window) return *window;
  const int lo = n_exponents.front();
  const int hi = n_exponents.back();
  return {lo + (hi - lo + 1) / 2, hi};
}

std::size_t EstimationProtocol::max_n() const { return std::size_t{1} << n_exponents.back(); }

std::pair<double, double> least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("regression needs at least two points");
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DomainError("regression abscissae are all equal");
  const double slope = sxy / sxx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss += r * r;
  }
  return {slope, std::sqrt(ss / m)};
}

GrowthReport growth_exponent(const MetricSystem& system, const EstimationProtocol& protocol) {
  protocol.validate();
  GrowthReport report;
  report.system = system.descriptor();
  report.window = protocol.regression_window();

  std::vector<int> eps_exponents = protocol.eps_exponents;
  std::sort(eps_exponents.begin(), eps_exponents.end());
  eps_exponents.erase(std::unique(eps_exponents.begin(), eps_exponents.end()), eps_exponents.end());

  for (int k : eps_exponents) {
    const double eps = std::ldexp(1.0, -k);
    NetRequest request;
    request.mesh = Rational(1) / (mpz_class(1) << k) * protocol.mesh_factor;
    request.mesh.canonicalize();
    request.horizon = protocol.max_n();
    request.sample_budget = protocol.sample_budget;
    request.orbit_budget = protocol.orbit_budget;
    request.refine = protocol.refine;
    const auto table = system.orbit_table(request);

    SlopeFit fit;
    fit.eps = eps;
    fit.mesh = table->mesh;
    fit.sample_size = table->size();
    fit.notes = table->notes;
    std::vector<double> xs, ys;
    std::size_t running = 0;
    for (int j : protocol.n_exponents) {
      const std::size_t n = std::size_t{1} << j;
      const auto sub = table_for_horizon(table, n);
      const bool indexed = protocol.kernel == KernelChoice::indexed;
      const std::size_t sep = indexed ? greedy_separated(*sub, n, eps).size()
                                      : reference::greedy_separated(*sub, n, eps).size();
      std::optional<std::size_t> span;
      if (protocol.spanning) span = indexed ? greedy_spanning(*sub, n, eps) : reference::greedy_spanning(*sub, n, eps);
      running = std::max(running, sep);
      report.counts.push_back(CountRow{eps, n, running, sep, span, sub->size()});
      if (j >= report.window.first && j <= report.window.second) {
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(static_cast<double>(running)));
      }
    }
    fit.points = xs.size();
    if (std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); })) {
      fit.degenerate = true;
      fit.slope = 0.0;
      fit.residual = 0.0;
    } else {
      std::tie(fit.slope, fit.residual) = least_squares_slope(xs, ys);
    }
    for (const std::string& note : fit.notes) report.flags.push_back("eps=" + std::to_string(eps) + ": " + note);
    report.fits.push_back(std::move(fit));
  }
  // fits are in decreasing eps; the two smallest are at the back.
  const std::size_t m = report.fits.size();
  report.exponent = report.fits.back().slope;
  if (m >= 2) report.exponent = std::max(report.exponent, report.fits[m - 2].slope);
  return report;
}

void write_counts_csv(std::ostream& out, const std::vector<GrowthReport>& reports) {
  out << "system,eps,n,sep_greedy,span_greedy\n";
  char eps[64];
  for (const GrowthReport& r : reports) {
    for (const CountRow& row : r.counts) {
      std::snprintf(eps, sizeof eps, "%.17g", row.eps);
      std::string name = r.system;
      if (name.find_first_of(",\"") != std::string::npos) {
        std::string quoted = "\"";
        for (char c : name) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        name = quoted + "\"";
      }
      out << name << ',' << eps << ',' << row.n << ',' << row.sep << ',';
      if (row.span) out << *row.span;
      out << '\n';
    }
  }
}

KatoReport kato_bound_check(const PLMap& f, double exponent_estimate, const EstimationProtocol& protocol) {
  protocol.validate();
  KatoReport out;
  out.exponent_estimate = exponent_estimate;
  const auto [lo, hi] = protocol.regression_window();
  double slope = 0.0;
  for (int j : protocol.n_exponents) {
    if (j < lo || j > hi || j == 0) continue;
    const std::size_t n = std::size_t{1} << j;
    try {
      const std::uint64_t value = phi(f, n);
      out.phi.push_back(PhiSample{n, value});
      slope = std::max(slope, std::log(static_cast<double>(value)) / std::log(static_cast<double>(n)));
    } catch (const ResourceError&) {
      out.bound_infinite = true;
      break;
    }
  }
  out.phi_slope = out.bound_infinite ? std::numeric_limits<double>::infinity() : slope;
  out.bound = 1.0 + out.phi_slope;
  out.satisfied = out.bound_infinite || exponent_estimate <= out.bound + protocol.tolerance;
  return out;
}

KatoReport kato_bound_check(const PLMap& f, const EstimationProtocol& protocol) {
  const GraphSystem system("map", f);
  return kato_bound_check(f, growth_exponent(system, protocol).exponent, protocol);
}

LapReport lap_bound_check(const PLMap& f, std::size_t n, double exponent_estimate, const EstimationProtocol& protocol) {
  protocol.validate();
  LapReport out;
  out.n = n == 0 ? protocol.max_n() : n;
  out.exponent_estimate = exponent_estimate;
  if (out.n < 2) throw DomainError("lap bound needs n >= 2");
  try {
    out.laps = lap_number(f, out.n);
    out.bound = 1.0 + std::log(static_cast<double>(*out.laps)) / std::log(static_cast<double>(out.n));
  } catch (const ResourceError&) {
    out.bound = std::numeric_limits<double>::infinity();
  }
  out.satisfied = exponent_estimate <= out.bound + protocol.tolerance;
  return out;
}

LapReport lap_bound_check(const PLMap& f, std::size_t n, const EstimationProtocol& protocol) {
  const GraphSystem system("map", f);
  return lap_bound_check(f, n, growth_exponent(system, protocol).exponent, protocol);
}

}  // namespace polyent
