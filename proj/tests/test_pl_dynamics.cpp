#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/pl_map.hpp"

using namespace polyent;

namespace {

GraphPoint pt(const PLMap& f, EdgeId e, const Rational& t) { return f.domain().canonical(e, t); }
GraphPoint pt(const PLMap& f, const Rational& t) { return pt(f, 0, t); }

GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<int> num(0, 997);
  return g.canonical(edge(rng), Rational(num(rng), 997));
}

std::vector<PLMap> homeomorphisms() {
  return {catalog::identity(),
          catalog::pl_contract(),
          catalog::flip(),
          catalog::rotation(catalog::parse_angle("golden")),
          catalog::rotation(Rational(1, 3)),
          catalog::tripod_rotate(),
          catalog::tripod_contract(),
          catalog::lollipop_contract(),
          catalog::bend(catalog::unit_interval())};
}

std::vector<PLMap> interval_maps() {
  return {catalog::identity(), catalog::tent(), catalog::pl_contract(), catalog::flip(),
          catalog::bend(catalog::unit_interval())};
}

PLMap constant_map(const Rational& value) {
  return PLMap(catalog::unit_interval(), {{Piece{0, 1, 0, 0, value}}});
}

}  // namespace

TEST_CASE("validity reports") {
  const ValidityReport id = validate_map(catalog::identity());
  CHECK(id.continuous);
  CHECK(id.homeomorphism);

  const ValidityReport tent = validate_map(catalog::tent());
  CHECK(tent.continuous);
  CHECK_FALSE(tent.homeomorphism);

  const ValidityReport contract = validate_map(catalog::pl_contract());
  CHECK(contract.continuous);
  REQUIRE(contract.homeomorphism);
  REQUIRE(contract.certificate);
  for (int o : contract.certificate->orientation[0]) CHECK(o == 1);

  const PLMap jump(catalog::unit_interval(),
                   {{Piece{0, Rational(1, 2), 0, 1, 0}, Piece{Rational(1, 2), 1, 0, 1, Rational(-1, 4)}}});
  CHECK_FALSE(validate_map(jump).continuous);
  CHECK_THROWS_AS(require_homeomorphism(catalog::tent()), NotHomeomorphismError);
  CHECK_THROWS_AS(PLMap(catalog::unit_interval(), {{Piece{0, 1, 0, 2, 0}}}), MalformedMapError);
}

TEST_CASE("apply examples") {
  const PLMap contract = catalog::pl_contract();
  CHECK(contract.apply(pt(contract, Rational(1, 2))) == pt(contract, Rational(1, 4)));
  CHECK(catalog::tent().apply(pt(contract, Rational(3, 4))) == pt(contract, Rational(1, 2)));
  const PLMap id = catalog::identity();
  CHECK(id.apply(pt(id, Rational(2, 7))) == pt(id, Rational(2, 7)));
}

TEST_CASE("composition and iterates") {
  const PLMap tent = catalog::tent();
  const PLMap contract = catalog::pl_contract();
  CHECK(monotone_run_count(compose(tent, tent)) == 4);
  CHECK(monotone_run_count(iterate(tent, 3)) == 8);
  CHECK(compose(contract, contract).apply(pt(contract, Rational(1, 2))) == pt(contract, Rational(1, 8)));
  CHECK(iterate(contract, 2).apply(pt(contract, Rational(1, 2))) == pt(contract, Rational(1, 8)));

  std::mt19937_64 rng(3);
  for (const PLMap& f : interval_maps()) {
    const PLMap once = iterate(f, 1);
    const PLMap left = compose(catalog::identity(), f);
    for (int k = 0; k < 100; ++k) {
      const GraphPoint p = random_point(f.domain(), rng);
      CHECK(once.apply(p) == f.apply(p));
      CHECK(left.apply(p) == f.apply(p));
    }
  }
  CHECK(validate_map(compose(tent, contract)).continuous);
  CHECK_THROWS_AS(iterate(tent, 12, 100), ResourceError);
  CHECK_THROWS_AS(compose(tent, catalog::tripod_rotate()), DomainError);
}

TEST_CASE("composition is associative on random points") {
  std::mt19937_64 rng(5);
  const auto maps = interval_maps();
  std::uniform_int_distribution<std::size_t> pick(0, maps.size() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    const PLMap& f = maps[pick(rng)];
    const PLMap& g = maps[pick(rng)];
    const PLMap& h = maps[pick(rng)];
    const PLMap a = compose(compose(f, g), h);
    const PLMap b = compose(f, compose(g, h));
    for (int k = 0; k < 100; ++k) {
      const GraphPoint p = random_point(f.domain(), rng);
      CHECK(a.apply(p) == b.apply(p));
      CHECK(a.apply(p) == f.apply(g.apply(h.apply(p))));
    }
  }
}

TEST_CASE("iterates split on breakpoints") {
  for (const PLMap& f : {catalog::tent(), catalog::pl_contract(), catalog::tripod_contract(), catalog::lollipop_contract()}) {
    for (std::size_t m = 1; m <= 3; ++m)
      for (std::size_t k = 1; k <= 3; ++k) {
        const PLMap whole = iterate(f, m + k);
        const PLMap split = compose(iterate(f, m), iterate(f, k));
        for (EdgeId e = 0; e < f.domain().edge_count(); ++e)
          for (const Piece& piece : whole.pieces(e)) {
            CHECK(whole.apply(pt(f, e, piece.start)) == split.apply(pt(f, e, piece.start)));
            CHECK(whole.apply(pt(f, e, piece.end)) == split.apply(pt(f, e, piece.end)));
          }
      }
  }
}

TEST_CASE("lap numbers") {
  for (std::size_t n = 1; n <= 20; ++n) {
    CHECK(lap_number(catalog::tent(), n) == (std::uint64_t{1} << n));
    CHECK(lap_number(catalog::identity(), n) == 1);
    CHECK(lap_number(catalog::pl_contract(), n) == 1);
  }
  for (std::size_t n = 1; n <= 10; ++n) CHECK(lap_number_by_composition(catalog::tent(), n) == (std::uint64_t{1} << n));
  CHECK_THROWS_AS(lap_number(catalog::tripod_rotate(), 2), DomainError);
}

TEST_CASE("lap numbers are monotone and bounded by powers of the piece count") {
  const PLMap zigzag(catalog::unit_interval(), {{Piece{0, Rational(1, 3), 0, 3, 0},
                                                 Piece{Rational(1, 3), Rational(2, 3), 0, -2, Rational(5, 3)},
                                                 Piece{Rational(2, 3), 1, 0, 0, Rational(1, 3)}}});
  REQUIRE(validate_map(zigzag).continuous);
  for (const PLMap& f : {catalog::tent(), catalog::pl_contract(), catalog::flip(), zigzag}) {
    std::uint64_t previous = 0;
    const double pieces = static_cast<double>(f.piece_count());
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::uint64_t c = lap_number(f, n);
      CHECK(c >= previous);
      CHECK(static_cast<double>(c) <= std::pow(pieces, static_cast<double>(n)));
      CHECK(c == lap_number_by_composition(f, n));
      previous = c;
    }
  }
}

TEST_CASE("phi") {
  for (const PLMap& f : homeomorphisms())
    for (std::size_t n = 1; n <= 10; ++n) CHECK(phi(f, n) == 1);
  for (std::size_t n = 1; n <= 8; ++n) CHECK(phi(catalog::tent(), n) == (std::uint64_t{1} << n));
  CHECK(phi(constant_map(Rational(1, 3)), 1) == 1);
  CHECK(phi(constant_map(Rational(1, 3)), 4) == 1);
}

TEST_CASE("phi is at most the lap number on interval maps") {
  const PLMap plateau(catalog::unit_interval(), {{Piece{0, Rational(1, 3), 0, 3, 0},
                                                  Piece{Rational(1, 3), Rational(2, 3), 0, 0, 1},
                                                  Piece{Rational(2, 3), 1, 0, -3, 3}}});
  REQUIRE(validate_map(plateau).continuous);
  for (const PLMap& f : {catalog::tent(), catalog::pl_contract(), catalog::flip(), plateau})
    for (std::size_t n = 1; n <= 6; ++n) CHECK(phi(f, n) <= lap_number(f, n));
}

TEST_CASE("fixed and periodic points") {
  const FixedSet contract = fixed_points(catalog::pl_contract());
  CHECK(contract.segments.empty());
  REQUIRE(contract.points.size() == 2);
  CHECK(contract.points[0] == pt(catalog::pl_contract(), 0));
  CHECK(contract.points[1] == pt(catalog::pl_contract(), 1));

  const FixedSet id = fixed_points(catalog::identity());
  REQUIRE(id.segments.size() == 1);
  CHECK(id.segments[0].start == 0);
  CHECK(id.segments[0].end == 1);

  CHECK(fixed_points(catalog::rotation(Rational(1, 3))).empty());

  const PLMap rotate = catalog::tripod_rotate();
  const FixedSet period3 = periodic_points(rotate, 3);
  CHECK(period3.segments.size() == rotate.domain().edge_count());
  std::mt19937_64 rng(9);
  for (int k = 0; k < 100; ++k) CHECK(period3.contains(rotate.domain(), random_point(rotate.domain(), rng)));

  const FixedSet period2 = periodic_points(catalog::pl_contract(), 2);
  CHECK(period2.points == contract.points);
  CHECK(period2.segments.empty());
  CHECK(periodic_points(catalog::identity(), 1).segments.size() == 1);
}

TEST_CASE("fixed points of homeomorphisms are exactly fixed") {
  for (const PLMap& f : homeomorphisms()) {
    const FixedSet fix = fixed_points(f);
    for (const GraphPoint& p : fix.points) CHECK(f.apply(p) == p);
    for (const FixedSegment& s : fix.segments) {
      CHECK(f.apply(pt(f, s.edge, s.start)) == pt(f, s.edge, s.start));
      CHECK(f.apply(pt(f, s.edge, s.end)) == pt(f, s.edge, s.end));
      const Rational mid = (s.start + s.end) / 2;
      CHECK(f.apply(pt(f, s.edge, mid)) == pt(f, s.edge, mid));
    }
  }
}

TEST_CASE("wandering status") {
  const PLMap contract = catalog::pl_contract();
  const WanderingVerdict w = wandering_status(contract, require_homeomorphism(contract), pt(contract, Rational(1, 2)));
  CHECK(w.status == Wandering::wandering);
  CHECK(w.exact);

  const PLMap id = catalog::identity();
  const HomeoCertificate id_cert = require_homeomorphism(id);
  for (int k = 0; k <= 8; ++k)
    CHECK(wandering_status(id, id_cert, pt(id, Rational(k, 8))).status == Wandering::nonwandering);

  const PLMap golden = catalog::rotation(catalog::parse_angle("golden"));
  const HomeoCertificate golden_cert = require_homeomorphism(golden);
  WanderingProbe probe;
  probe.horizon = 10000;
  probe.radius = 1e-2;
  for (int k = 0; k < 8; ++k)
    CHECK(wandering_status(golden, golden_cert, pt(golden, Rational(k, 8)), probe).status == Wandering::nonwandering);
}
