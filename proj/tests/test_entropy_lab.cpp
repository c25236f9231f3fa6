#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/estimation.hpp"
#include "polyent/kernels.hpp"
#include "polyent/oracle.hpp"
#include "polyent/systems.hpp"

using namespace polyent;

namespace {

std::vector<SystemPoint> as_system_points(const std::vector<GraphPoint>& points) {
  std::vector<SystemPoint> out;
  for (const GraphPoint& p : points) out.push_back({p});
  return out;
}

std::shared_ptr<const OrbitTable> grid_table(const std::string& name, const Rational& mesh, std::size_t horizon) {
  const auto system = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name(name));
  REQUIRE(system);
  return system->orbit_table_for(as_system_points(system->graph().sample_grid(mesh)), horizon);
}

std::shared_ptr<const OrbitTable> points_table(const std::string& name, const std::vector<Rational>& ts,
                                               std::size_t horizon) {
  const auto system = catalog::system_by_name(name);
  const auto graph = catalog::unit_interval();
  std::vector<SystemPoint> points;
  for (const Rational& t : ts) points.push_back({graph->canonical(0, t)});
  return system->orbit_table_for(points, horizon);
}

// Random oracle-sized point set on a catalog graph system.
std::shared_ptr<const OrbitTable> random_table(const std::string& name, std::size_t count, std::size_t horizon,
                                               std::mt19937_64& rng) {
  const auto system = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name(name));
  const MetricGraph& g = system->graph();
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<int> num(0, 64);
  std::vector<GraphPoint> points;
  while (points.size() < count) {
    const GraphPoint p = g.canonical(edge(rng), Rational(num(rng), 64));
    if (std::find(points.begin(), points.end(), p) == points.end()) points.push_back(p);
  }
  return system->orbit_table_for(as_system_points(points), horizon);
}

EstimationProtocol small_protocol(std::vector<int> eps, int n_hi) {
  EstimationProtocol p;
  p.eps_exponents = std::move(eps);
  p.n_exponents.clear();
  for (int j = 0; j <= n_hi; ++j) p.n_exponents.push_back(j);
  return p;
}

std::vector<std::size_t> sep_column(const GrowthReport& r, double eps) {
  std::vector<std::size_t> out;
  for (const CountRow& row : r.counts)
    if (row.eps == eps) out.push_back(row.sep_at_n);
  return out;
}

const std::vector<std::string> kOracleSystems = {"identity", "tent", "pl_contract", "flip", "rotation(golden)",
                                                 "tripod_contract", "lollipop_contract"};

}  // namespace

TEST_CASE("dynamic distance") {
  const auto contract = points_table("pl_contract", {Rational(1, 2), Rational(3, 4)}, 2);
  CHECK(contract->dynamic_distance(0, 1, 1) == doctest::Approx(0.25));
  CHECK(contract->dynamic_distance(0, 1, 2) == doctest::Approx(0.375));

  const auto id = grid_table("identity", Rational(1, 8), 16);
  const auto rotation = grid_table("rotation(golden)", Rational(1, 8), 16);
  for (std::size_t n = 1; n <= 16; n *= 2) {
    for (std::size_t i = 0; i < id->size(); ++i)
      for (std::size_t j = 0; j < id->size(); ++j) CHECK(id->dynamic_distance(i, j, n) == id->step_distance(i, j, 0));
    for (std::size_t i = 0; i < rotation->size(); ++i)
      for (std::size_t j = 0; j < rotation->size(); ++j)
        CHECK(rotation->dynamic_distance(i, j, n) == doctest::Approx(rotation->step_distance(i, j, 0)).epsilon(1e-9));
  }
}

TEST_CASE("dynamic distance is nondecreasing in n") {
  std::mt19937_64 rng(2);
  for (const std::string& name : kOracleSystems) {
    const auto table = random_table(name, 12, 32, rng);
    for (std::size_t i = 0; i < table->size(); ++i)
      for (std::size_t j = 0; j < table->size(); ++j)
        for (std::size_t n = 1; n < 32; ++n) CHECK(table->dynamic_distance(i, j, n) <= table->dynamic_distance(i, j, n + 1));
  }
}

TEST_CASE("greedy separated and spanning examples") {
  const auto id = grid_table("identity", Rational(1, 16), 8);
  REQUIRE(id->size() == 17);
  for (std::size_t n : {1, 2, 8}) {
    const auto kept = greedy_separated(*id, n, 0.25);
    CHECK(kept == std::vector<std::size_t>{0, 4, 8, 12, 16});
  }
  CHECK(exact_sep(*id, 1, 0.25) == 5);

  const std::size_t span = greedy_spanning(*id, 1, 0.25);
  CHECK(span >= 3);
  CHECK(span <= 5);
  CHECK(greedy_spanning(*id, 1, 1.0) == 1);

  const auto rotation = grid_table("rotation(golden)", Rational(1, 16), 64);
  const std::size_t sep_1 = greedy_separated(*rotation, 1, 0.125).size();
  const std::size_t span_1 = greedy_spanning(*rotation, 1, 0.125);
  for (std::size_t n : {2, 8, 64}) {
    CHECK(greedy_separated(*rotation, n, 0.125).size() == sep_1);
    CHECK(greedy_spanning(*rotation, n, 0.125) == span_1);
  }

  const auto contract = grid_table("pl_contract", Rational(1, 32), 64);
  CHECK(greedy_separated(*contract, 64, 0.125).size() > greedy_separated(*contract, 1, 0.125).size());
}

TEST_CASE("exact oracle examples") {
  const auto four = points_table("identity", {0, Rational(3, 10), Rational(3, 5), Rational(9, 10)}, 1);
  CHECK(exact_sep(*four, 1, 0.5) == 2);
  CHECK(exact_sep(*four, 1, 5.0) == 1);
  CHECK(exact_span(*four, 1, 5.0) == 1);
  CHECK(exact_cov(*four, 1, 5.0) == 1);

  const auto five = points_table("identity", {0, Rational(1, 4), Rational(1, 2), Rational(3, 4), 1}, 1);
  CHECK(exact_sep(*five, 1, 0.25) == 5);

  const auto big = grid_table("identity", Rational(1, 64), 1);
  CHECK_THROWS_AS(exact_sep(*big, 1, 0.1), ResourceError);
  const auto mid = grid_table("identity", Rational(1, 32), 1);
  CHECK_THROWS_AS(exact_span(*mid, 1, 0.1), ResourceError);
}

TEST_CASE("sandwich chain and greedy soundness on random instances") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> system(0, kOracleSystems.size() - 1);
  std::uniform_int_distribution<std::size_t> size(4, 14);
  std::uniform_int_distribution<std::size_t> horizon(1, 16);
  std::uniform_int_distribution<int> eps_k(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::string& name = kOracleSystems[system(rng)];
    const std::size_t n = horizon(rng);
    const auto table = random_table(name, size(rng), n, rng);
    const double eps = std::ldexp(1.0, -eps_k(rng));
    CAPTURE(name);
    CAPTURE(n);
    CAPTURE(eps);
    const std::size_t sep = exact_sep(*table, n, eps);
    CHECK(exact_cov(*table, n, 2 * eps) <= exact_span(*table, n, eps));
    CHECK(exact_span(*table, n, eps) <= sep);
    CHECK(sep <= exact_span(*table, n, eps / 2));
    CHECK(exact_span(*table, n, eps / 2) <= exact_cov(*table, n, eps / 2));

    const std::size_t greedy = greedy_separated(*table, n, eps).size();
    CHECK(exact_span(*table, n, eps) <= greedy);
    CHECK(greedy <= sep);
    CHECK(exact_span(*table, n, eps) <= greedy_spanning(*table, n, eps));
  }
}

TEST_CASE("exact sep is nondecreasing in n") {
  std::mt19937_64 rng(4);
  for (const std::string& name : kOracleSystems) {
    const auto table = random_table(name, 14, 16, rng);
    std::size_t previous = 0;
    for (std::size_t n = 1; n <= 16; ++n) {
      const std::size_t s = exact_sep(*table, n, 0.125);
      CHECK(s >= previous);
      previous = s;
    }
  }
}

TEST_CASE("indexed kernels agree with the reference") {
  const std::vector<std::pair<std::string, Rational>> cases = {
      {"pl_contract", Rational(1, 64)},     {"flip", Rational(1, 32)},
      {"tripod_contract", Rational(1, 32)}, {"lollipop_contract", Rational(1, 32)},
      {"rotation(golden)", Rational(1, 64)}, {"prod(rotation(golden),pl_contract)", Rational(1, 8)},
      {"F2(pl_contract)", Rational(1, 8)},  {"F3(tripod_rotate)", Rational(1, 4)}};
  for (const auto& [name, mesh] : cases) {
    NetRequest request;
    request.mesh = mesh;
    request.horizon = 16;
    const auto full = catalog::system_by_name(name)->orbit_table(request);
    for (std::size_t n : {1, 4, 16}) {
      const auto table = table_for_horizon(full, n);
      for (double eps : {1.0, 0.5, 0.25, 0.125}) {
        CAPTURE(name);
        CAPTURE(n);
        CAPTURE(eps);
        CHECK(greedy_separated(*table, n, eps) == reference::greedy_separated(*table, n, eps));
        CHECK(greedy_spanning(*table, n, eps) == reference::greedy_spanning(*table, n, eps));
      }
    }
  }
}

TEST_CASE("least squares") {
  const auto [slope, residual] = least_squares_slope({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(slope == doctest::Approx(2.0));
  CHECK(residual == doctest::Approx(0.0));
}

TEST_CASE("protocol validation") {
  EstimationProtocol p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.regression_window() == std::pair<int, int>{6, 12});
  CHECK(p.max_n() == 4096);
  p.mesh_factor = Rational(3, 4);
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = EstimationProtocol{};
  p.window = std::pair<int, int>{10, 12};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = EstimationProtocol{};
  p.eps_exponents.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("growth exponents of simple systems") {
  const EstimationProtocol p = small_protocol({3, 4}, 8);
  const GrowthReport id = growth_exponent(*catalog::system_by_name("identity"), p);
  CHECK(std::abs(id.exponent) <= 0.05);
  CHECK(growth_exponent(*catalog::system_by_name("rotation(golden)"), p).exponent <= 0.15);
  CHECK(growth_exponent(*catalog::system_by_name("prod(identity,identity)"), small_protocol({2, 3}, 6)).exponent <= 0.05);

  const GrowthReport contract = growth_exponent(*catalog::system_by_name("pl_contract"), p);
  CHECK(contract.exponent >= 0.8);
  CHECK(contract.exponent <= 1.1);
  for (const SlopeFit& fit : contract.fits) {
    std::size_t previous = 0;
    for (const CountRow& row : contract.counts)
      if (row.eps == fit.eps) {
        CHECK(row.sep >= previous);
        CHECK(row.sep >= row.sep_at_n);
        previous = row.sep;
      }
  }
}

TEST_CASE("isometry counts do not depend on n") {
  const EstimationProtocol p = small_protocol({3, 4, 5}, 9);
  for (const std::string& name : {"identity", "rotation(golden)", "rotation(1/3)", "tripod_rotate", "flip"}) {
    const GrowthReport r = growth_exponent(*catalog::system_by_name(name), p);
    for (const SlopeFit& fit : r.fits) {
      const auto column = sep_column(r, fit.eps);
      CAPTURE(name);
      CAPTURE(fit.eps);
      for (std::size_t s : column) CHECK(s == column.front());
    }
    CHECK(r.exponent <= 0.15);
  }
}

TEST_CASE("trivial power and conjugacy leave counts unchanged") {
  const EstimationProtocol p = small_protocol({3, 4}, 6);
  const GrowthReport base = growth_exponent(*catalog::system_by_name("pl_contract"), p);
  const GrowthReport power = growth_exponent(*catalog::system_by_name("pow(pl_contract,1)"), p);
  const GrowthReport conj = growth_exponent(*catalog::system_by_name("conj(pl_contract,identity)"), p);
  REQUIRE(base.counts.size() == power.counts.size());
  REQUIRE(base.counts.size() == conj.counts.size());
  for (std::size_t i = 0; i < base.counts.size(); ++i) {
    CHECK(base.counts[i].sep == power.counts[i].sep);
    CHECK(base.counts[i].span == power.counts[i].span);
    CHECK(base.counts[i].sep == conj.counts[i].sep);
    CHECK(base.counts[i].span == conj.counts[i].span);
  }
  CHECK(base.exponent == power.exponent);
  CHECK(base.exponent == conj.exponent);
}

TEST_CASE("finite union of invariant pieces") {
  // Two invariant edges: the identity on one, the contraction on the other.
  const auto graph = std::make_shared<const MetricGraph>(
      MetricGraph::from_edges({"u", "v", "w"}, {{"u", "v", Rational(1)}, {"v", "w", Rational(1)}}));
  const PLMap joined(graph, {{Piece{0, 1, 0, 1, 0}},
                             {Piece{0, Rational(1, 2), 1, Rational(1, 2), 0},
                              Piece{Rational(1, 2), 1, 1, Rational(3, 2), Rational(-1, 2)}}});
  REQUIRE(validate_map(joined).homeomorphism);
  const EstimationProtocol p = small_protocol({3, 4}, 8);
  const double whole = growth_exponent(*make_graph_system("joined", joined), p).exponent;
  const double idle = growth_exponent(*catalog::system_by_name("identity"), p).exponent;
  const double contract = growth_exponent(*catalog::system_by_name("pl_contract"), p).exponent;
  CHECK(std::abs(whole - std::max(idle, contract)) <= 0.1);
}

TEST_CASE("kato and lap bounds") {
  const EstimationProtocol p = small_protocol({3}, 10);
  for (const char* name : {"identity", "pl_contract", "flip", "tripod_rotate", "lollipop_contract"}) {
    const KatoReport k = kato_bound_check(catalog::map_by_name(name), 1.0, p);
    CHECK(k.bound == 1.0);
    CHECK(k.satisfied);
  }
  const KatoReport tent = kato_bound_check(catalog::tent(), 1.0, p);
  CHECK((tent.bound_infinite || tent.bound > 5.0));
  CHECK(tent.satisfied);

  const LapReport contract = lap_bound_check(catalog::pl_contract(), 0, 1.0, p);
  CHECK(contract.n == 1024);
  CHECK(contract.bound == 1.0);
  CHECK(contract.satisfied);
  const LapReport tent_laps = lap_bound_check(catalog::tent(), 16, 1.0, p);
  REQUIRE(tent_laps.laps);
  CHECK(*tent_laps.laps == 65536);
  CHECK(tent_laps.bound == doctest::Approx(1.0 + 16 * std::log(2.0) / std::log(16.0)));
}

TEST_CASE("counts csv") {
  EstimationProtocol p = small_protocol({2}, 6);
  p.spanning = false;
  const GrowthReport r = growth_exponent(*catalog::system_by_name("identity"), p);
  std::ostringstream out;
  write_counts_csv(out, {r});
  const std::string text = out.str();
  CHECK(text.rfind("system,eps,n,sep_greedy,span_greedy\n", 0) == 0);
  CHECK(text.find("identity,0.25,1,5,\n") != std::string::npos);
}
