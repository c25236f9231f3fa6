#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <queue>
#include <random>
#include <set>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/phase_space.hpp"

using namespace polyent;

namespace {

GraphPoint at(const MetricGraph& g, EdgeId e, const Rational& t) { return g.canonical(e, t); }

GraphPoint vertex(const MetricGraph& g, const std::string& name) { return g.vertex_point(g.vertex_index(name)); }

GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<int> num(0, 1024);
  return g.canonical(edge(rng), Rational(num(rng), 1024));
}

std::vector<std::shared_ptr<const MetricGraph>> catalog_graphs() {
  return {catalog::unit_interval(), catalog::unit_circle(), catalog::tripod(), catalog::lollipop()};
}

// Components of a tree with an interior point or vertex removed, by BFS on
// the remaining edge-ends.
int split_components(const MetricGraph& g, const GraphPoint& p) {
  const VertexId v = g.vertex_at(p);
  if (v == MetricGraph::npos) return 2;
  std::vector<std::vector<VertexId>> adj(g.vertex_count());
  for (const Edge& e : g.edges()) {
    adj[e.from].push_back(e.to);
    adj[e.to].push_back(e.from);
  }
  std::vector<bool> seen(g.vertex_count(), false);
  seen[v] = true;
  int components = 0;
  for (VertexId start : adj[v]) {
    if (seen[start]) continue;
    ++components;
    std::queue<VertexId> queue;
    queue.push(start);
    seen[start] = true;
    while (!queue.empty()) {
      const VertexId u = queue.front();
      queue.pop();
      for (VertexId w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          queue.push(w);
        }
    }
  }
  return components;
}

}  // namespace

TEST_CASE("interval construction") {
  const MetricGraph g = MetricGraph::interval(1);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.diameter() == 1);
  CHECK(g.kind() == GraphKind::interval);
  CHECK(g.classify(at(g, 0, 0)).kind == PointKind::endpoint);
  CHECK(g.classify(at(g, 0, 1)).kind == PointKind::endpoint);
  CHECK(g.classify(at(g, 0, 0)).order == 1);

  const MetricGraph g2 = MetricGraph::interval(2);
  CHECK(g2.distance_exact(at(g2, 0, 0), at(g2, 0, 1)) == 2);
}

TEST_CASE("circle distances") {
  const MetricGraph c = MetricGraph::circle(1);
  CHECK(c.kind() == GraphKind::circle);
  CHECK(c.distance_exact(at(c, 0, Rational(1, 10)), at(c, 0, Rational(9, 10))) == Rational(1, 5));
  CHECK(c.distance_exact(at(c, 0, Rational(1, 3)), at(c, 0, Rational(1, 3))) == 0);
  CHECK(c.distance_exact(at(c, 0, 0), at(c, 0, Rational(1, 2))) == Rational(1, 2));
  CHECK(at(c, 0, 0) == at(c, 0, 1));

  const MetricGraph c4 = MetricGraph::circle(4);
  CHECK(c4.distance_exact(at(c4, 0, Rational(1, 8)), at(c4, 0, Rational(5, 8))) == 2);
}

TEST_CASE("tripod and lollipop") {
  const auto tripod = catalog::tripod();
  CHECK(tripod->kind() == GraphKind::tree);
  CHECK(tripod->edge_count() == tripod->vertex_count() - 1);
  CHECK(tripod->distance_exact(vertex(*tripod, "a"), vertex(*tripod, "b")) == 2);
  CHECK(tripod->distance_exact(at(*tripod, 0, Rational(1, 2)), at(*tripod, 1, Rational(1, 2))) == 1);

  const PointClass centre = tripod->classify(vertex(*tripod, "c"));
  CHECK(centre.kind == PointKind::branch);
  CHECK(centre.order == 3);
  const PointClass leaf = tripod->classify(vertex(*tripod, "a"));
  CHECK(leaf.kind == PointKind::endpoint);
  CHECK(leaf.order == 1);
  CHECK(tripod->classify(at(*tripod, 2, Rational(1, 3))).kind == PointKind::ordinary);

  const auto lollipop = catalog::lollipop();
  CHECK(lollipop->distance_exact(vertex(*lollipop, "e"), vertex(*lollipop, "j")) == 1);
  CHECK(lollipop->cycle_count() == 1);
}

TEST_CASE("single edge graph matches the interval") {
  const MetricGraph g = MetricGraph::from_edges({"u", "v"}, {{"u", "v", Rational(1)}});
  const MetricGraph i = MetricGraph::interval(1);
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      CHECK(g.distance_exact(at(g, 0, Rational(a, 8)), at(g, 0, Rational(b, 8))) ==
            i.distance_exact(at(i, 0, Rational(a, 8)), at(i, 0, Rational(b, 8))));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(MetricGraph::interval(0), ConstructionError);
  CHECK_THROWS_AS(MetricGraph::circle(-1), ConstructionError);
  CHECK_THROWS_AS(MetricGraph::from_edges({"u", "v", "w"}, {{"u", "v", Rational(1)}}), ConstructionError);
  const MetricGraph g = MetricGraph::interval(1);
  CHECK_THROWS_AS(g.canonical(0, Rational(3, 2)), DomainError);
  CHECK_THROWS_AS(g.canonical(1, Rational(1, 2)), DomainError);
}

TEST_CASE("sample grid counts") {
  const MetricGraph g = MetricGraph::interval(1);
  const auto grid = g.sample_grid(Rational(1, 4));
  REQUIRE(grid.size() == 5);
  for (int k = 0; k <= 4; ++k) CHECK(grid[k] == at(g, 0, Rational(k, 4)));
  CHECK(catalog::tripod()->sample_grid(Rational(1, 2)).size() == 7);
  CHECK(catalog::unit_circle()->sample_grid(Rational(1, 4)).size() == 4);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(7);
  for (const auto& g : catalog_graphs()) {
    for (int trial = 0; trial < 1000; ++trial) {
      const GraphPoint p = random_point(*g, rng);
      const GraphPoint q = random_point(*g, rng);
      const GraphPoint r = random_point(*g, rng);
      const Rational pq = g->distance_exact(p, q);
      CHECK(pq == g->distance_exact(q, p));
      CHECK(g->distance_exact(p, r) <= pq + g->distance_exact(q, r));
      CHECK((pq == 0) == (p == q));
      CHECK(g->distance(g->numeric(p), g->numeric(q)) == doctest::Approx(to_double(pq)).epsilon(1e-12));
    }
  }
}

TEST_CASE("sample grid is a mesh net") {
  std::mt19937_64 rng(11);
  const Rational mesh(1, 8);
  for (const auto& g : catalog_graphs()) {
    const auto grid = g->sample_grid(mesh);
    std::vector<NumericPoint> numeric;
    for (const GraphPoint& s : grid) numeric.push_back(g->numeric(s));
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
      const NumericPoint p = g->numeric(random_point(*g, rng));
      double nearest = to_double(g->diameter());
      for (const NumericPoint& s : numeric) nearest = std::min(nearest, g->distance(p, s));
      worst = std::max(worst, nearest);
    }
    CHECK(worst <= to_double(mesh) / 2 + 1e-12);
  }
}

TEST_CASE("order on a tree equals the split count") {
  const MetricGraph g = MetricGraph::from_edges(
      {"r", "x", "y", "z", "w", "v"},
      {{"r", "x", Rational(1)}, {"r", "y", Rational(1, 2)}, {"r", "z", Rational(2)}, {"z", "w", Rational(1)},
       {"z", "v", Rational(1, 3)}});
  REQUIRE(g.kind() == GraphKind::tree);
  for (const GraphPoint& p : g.sample_grid(Rational(1, 4))) {
    const PointClass c = g.classify(p);
    const int components = split_components(g, p);
    CHECK(c.order == components);
    if (components == 1) CHECK(c.kind == PointKind::endpoint);
    if (components == 2) CHECK(c.kind == PointKind::ordinary);
    if (components > 2) CHECK(c.kind == PointKind::branch);
  }
}

TEST_CASE("canonical vertex representation") {
  const auto tripod = catalog::tripod();
  const GraphPoint c0 = at(*tripod, 0, 0);
  CHECK(c0 == at(*tripod, 1, 0));
  CHECK(c0 == at(*tripod, 2, 0));
  CHECK(c0.edge == 0);
}
