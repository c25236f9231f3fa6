#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/hyperspace.hpp"

using namespace polyent;

namespace {

FiniteSubset interval_set(std::initializer_list<Rational> ts) {
  const auto g = catalog::unit_interval();
  std::vector<GraphPoint> points;
  for (const Rational& t : ts) points.push_back(g->canonical(0, t));
  return FiniteSubset(*g, points);
}

GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<int> num(0, 256);
  return g.canonical(edge(rng), Rational(num(rng), 256));
}

FiniteSubset random_subset(const MetricGraph& g, std::size_t max_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> size(1, max_size);
  std::vector<GraphPoint> points;
  for (std::size_t k = size(rng); k > 0; --k) points.push_back(random_point(g, rng));
  return FiniteSubset(g, points);
}

EstimationProtocol coarse_protocol() {
  EstimationProtocol p;
  p.eps_exponents = {2};
  p.n_exponents = {0, 1, 2, 3, 4, 5};
  p.window = std::pair<int, int>{2, 5};
  p.mesh_factor = Rational(1, 2);
  p.spanning = false;
  return p;
}

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t out = 1;
  for (std::size_t i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

TEST_CASE("hausdorff distance examples") {
  const auto g = catalog::unit_interval();
  const FiniteSubset a = interval_set({Rational(1, 3), Rational(2, 3)});
  CHECK(hausdorff_distance_exact(*g, a, a) == 0);
  CHECK(hausdorff_distance_exact(*g, interval_set({0}), interval_set({1})) == 1);
  CHECK(hausdorff_distance_exact(*g, interval_set({0, 1}), interval_set({Rational(1, 2)})) == Rational(1, 2));
  CHECK(hausdorff_distance(*g, interval_set({0, 1}), interval_set({Rational(1, 2)})) == 0.5);
}

TEST_CASE("subsets are canonical sets") {
  const FiniteSubset a = interval_set({Rational(3, 4), Rational(1, 4), Rational(3, 4)});
  CHECK(a.size() == 2);
  CHECK(a == interval_set({Rational(1, 4), Rational(3, 4)}));
  CHECK_THROWS(FiniteSubset(*catalog::unit_interval(), {}));
}

TEST_CASE("hausdorff metric axioms on random triples") {
  std::mt19937_64 rng(21);
  for (const auto& g : {catalog::unit_interval(), catalog::unit_circle(), catalog::tripod(), catalog::lollipop()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const FiniteSubset a = random_subset(*g, 4, rng);
      const FiniteSubset b = random_subset(*g, 4, rng);
      const FiniteSubset c = random_subset(*g, 4, rng);
      const Rational ab = hausdorff_distance_exact(*g, a, b);
      CHECK(ab == hausdorff_distance_exact(*g, b, a));
      CHECK(hausdorff_distance_exact(*g, a, c) <= ab + hausdorff_distance_exact(*g, b, c));
      CHECK((ab == 0) == (a == b));
    }
  }
}

TEST_CASE("singletons embed isometrically") {
  std::mt19937_64 rng(22);
  for (const auto& g : {catalog::unit_circle(), catalog::tripod(), catalog::lollipop()}) {
    for (int trial = 0; trial < 500; ++trial) {
      const GraphPoint x = random_point(*g, rng);
      const GraphPoint y = random_point(*g, rng);
      CHECK(hausdorff_distance_exact(*g, FiniteSubset(*g, {x}), FiniteSubset(*g, {y})) == g->distance_exact(x, y));
    }
  }
}

TEST_CASE("induced maps") {
  const InducedMap id = induced_map(catalog::identity(), 3);
  const FiniteSubset a = interval_set({0, Rational(1, 5), Rational(7, 9)});
  CHECK(id(a) == a);

  const InducedMap contract = induced_map(catalog::pl_contract(), 2);
  CHECK(contract(interval_set({Rational(1, 2), Rational(3, 4)})) == interval_set({Rational(1, 4), Rational(5, 8)}));

  const InducedMap tent = induced_map(catalog::tent(), 2);
  CHECK(tent(interval_set({Rational(1, 4), Rational(3, 4)})) == interval_set({Rational(1, 2)}));
  CHECK(tent.collapses() == 1);

  CHECK_THROWS_AS(contract(a), DomainError);
}

TEST_CASE("factor identity") {
  const auto g = catalog::unit_interval();
  std::mt19937_64 rng(23);
  std::vector<std::vector<GraphPoint>> pairs;
  for (int k = 0; k < 1000; ++k) pairs.push_back({random_point(*g, rng), random_point(*g, rng)});

  CHECK(factor_map_check(catalog::identity(), 2, pairs).holds);
  const FactorCheck contract = factor_map_check(catalog::pl_contract(), 2, pairs);
  CHECK(contract.holds);
  CHECK(contract.checked == 1000);
  CHECK(factor_map_check(catalog::tent(), 2, pairs).holds);
  CHECK(factor_map_check(catalog::tent(), 2, {{g->canonical(0, Rational(1, 4)), g->canonical(0, Rational(3, 4))}}).holds);
}

TEST_CASE("induced homeomorphisms round-trip") {
  std::mt19937_64 rng(24);
  for (const PLMap& f : {catalog::pl_contract(), catalog::flip(), catalog::rotation(catalog::parse_angle("golden")),
                         catalog::tripod_rotate(), catalog::tripod_contract(), catalog::lollipop_contract()}) {
    const HomeoCertificate cert = require_homeomorphism(f);
    REQUIRE(cert.inverse);
    const InducedMap forward = induced_map(f, 3);
    const InducedMap backward = induced_map(*cert.inverse, 3);
    for (int trial = 0; trial < 200; ++trial) {
      const FiniteSubset a = random_subset(f.domain(), 3, rng);
      const FiniteSubset image = forward(a);
      CHECK(image.size() == a.size());
      CHECK(backward(image) == a);
      CHECK(forward(backward(a)) == a);
    }
    CHECK(forward.collapses() == 0);
  }
}

TEST_CASE("subset enumeration") {
  for (std::size_t count : {1, 5, 9})
    for (std::size_t power = 1; power <= 3; ++power) {
      const auto subsets = enumerate_subsets(count, power);
      std::size_t expected = 0;
      for (std::size_t k = 1; k <= power; ++k) expected += binomial(count, k);
      CHECK(subsets.size() == expected);
      CHECK(subset_count(count, power) == expected);
      for (const auto& s : subsets) CHECK(std::is_sorted(s.begin(), s.end()));
    }
  const auto two = enumerate_subsets(3, 2);
  REQUIRE(two.size() == 6);
  CHECK(two[0] == SymmetricOrbitTable::Subset{0});
  CHECK(two[1] == SymmetricOrbitTable::Subset{0, 1});
}

TEST_CASE("symmetric product systems") {
  const auto base = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name("pl_contract"));
  REQUIRE(base);
  CHECK_THROWS_AS(symmetric_product_system(base, 4), ConfigError);
  CHECK_THROWS_AS(symmetric_product_system(base, 0), ConfigError);

  const auto f2 = symmetric_product_system(base, 2);
  const auto sample = f2->sample(Rational(1, 4));
  CHECK(sample.size() == subset_count(5, 2));
  const SystemPoint p{catalog::unit_interval()->canonical(0, Rational(1, 2)),
                      catalog::unit_interval()->canonical(0, Rational(3, 4))};
  const SystemPoint image = f2->apply(p);
  REQUIRE(image.size() == 2);
  CHECK(image[0].t == Rational(1, 4));
  CHECK(image[1].t == Rational(5, 8));
}

TEST_CASE("F1 matches the base system") {
  const EstimationProtocol p = coarse_protocol();
  for (const char* name : {"pl_contract", "tripod_contract"}) {
    const double base = growth_exponent(*catalog::system_by_name(name), p).exponent;
    const double f1 = growth_exponent(*catalog::system_by_name(std::string("F1(") + name + ")"), p).exponent;
    CHECK(f1 == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("symmetric product is dominated by the product") {
  const EstimationProtocol p = coarse_protocol();
  for (const char* name : {"rotation(golden)", "tripod_rotate", "pl_contract"}) {
    const std::string f = name;
    const double sym = growth_exponent(*catalog::system_by_name("F2(" + f + ")"), p).exponent;
    const double prod = growth_exponent(*catalog::system_by_name("prod(" + f + "," + f + ")"), p).exponent;
    CAPTURE(f);
    CHECK(sym <= prod + 0.2);
  }
}

TEST_CASE("hyperspace trends") {
  const EstimationProtocol p = coarse_protocol();
  const auto identity = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name("identity"));
  const HyperspaceTrend flat = hyperspace_growth_trend(identity, 3, p);
  REQUIRE(flat.rows.size() == 3);
  for (const TrendRow& row : flat.rows) CHECK(std::abs(row.report.exponent) <= 0.05);
  CHECK_FALSE(flat.increasing);
  CHECK_FALSE(flat.note.empty());

  const auto rotate = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name("tripod_rotate"));
  for (const TrendRow& row : hyperspace_growth_trend(rotate, 3, p).rows) CHECK(row.report.exponent <= 0.2);

  CHECK_THROWS_AS(hyperspace_growth_trend(identity, 4, p), ConfigError);
  CHECK_THROWS_AS(hyperspace_growth_trend(identity, 0, p), ConfigError);
}
