#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "polyent/acceptance.hpp"
#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/hyperspace.hpp"
#include "polyent/kernels.hpp"
#include "polyent/oracle.hpp"
#include "polyent/systems.hpp"

namespace polyent {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::skip: return "SKIP";
  }
  return "SKIP";
}

namespace {

EstimationProtocol with(std::vector<int> eps, int n_lo, int n_hi, Rational mesh_factor = Rational(1, 4)) {
  EstimationProtocol p;
  p.eps_exponents = std::move(eps);
  p.n_exponents.clear();
  for (int j = n_lo; j <= n_hi; ++j) p.n_exponents.push_back(j);
  p.mesh_factor = mesh_factor;
  return p;
}

std::string fixed(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

struct Run {
  std::uint64_t seed;
  double tolerance;
  std::vector<GrowthReport> reports;  // CSV content of the current criterion
  std::map<std::string, GrowthReport> cache;

  const GrowthReport& estimate(const std::string& name, const EstimationProtocol& p, const std::string& role) {
    const std::string key = role + "|" + name;
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, growth_exponent(*catalog::system_by_name(name), p)).first;
    reports.push_back(it->second);
    return it->second;
  }
};

struct Outcome {
  bool ok;
  std::string detail;
};

// ---- 1: lap numbers -------------------------------------------------------

Outcome lap_numbers(Run&) {
  std::ostringstream why;
  bool ok = true;
  const PLMap tent = catalog::tent();
  for (std::size_t n = 1; n <= 20; ++n) {
    const std::uint64_t c = lap_number(tent, n);
    if (c != (std::uint64_t{1} << n)) {
      ok = false;
      why << "c_" << n << "(tent)=" << c << "; ";
    }
    if (n <= 12 && lap_number_by_composition(tent, n) != c) {
      ok = false;
      why << "composition route disagrees at n=" << n << "; ";
    }
  }
  for (const char* name : {"identity", "pl_contract", "flip", "bend"}) {
    const PLMap f = catalog::map_by_name(name);
    for (std::size_t n = 1; n <= 20; ++n) {
      if (lap_number(f, n) != 1 || lap_number_by_composition(f, n) != 1) {
        ok = false;
        why << "c_" << n << "(" << name << ") != 1; ";
      }
    }
  }
  if (ok) why << "tent 2^n for n=1..20; identity, pl_contract, flip, bend all 1 (two routes)";
  return {ok, why.str()};
}

// ---- 2: phi ---------------------------------------------------------------

std::vector<std::pair<std::string, PLMap>> catalog_homeomorphisms() {
  return {{"identity", catalog::identity()},
          {"pl_contract", catalog::pl_contract()},
          {"flip", catalog::flip()},
          {"bend", catalog::bend(catalog::unit_interval())},
          {"rotation(golden)", catalog::map_by_name("rotation(golden)")},
          {"rotation(1/3)", catalog::rotation(Rational(1, 3))},
          {"tripod_rotate", catalog::tripod_rotate()},
          {"tripod_contract", catalog::tripod_contract()},
          {"lollipop_contract", catalog::lollipop_contract()},
          {"bend(tripod)", catalog::bend(catalog::tripod())},
          {"bend(lollipop)", catalog::bend(catalog::lollipop())}};
}

Outcome exact_phi(Run&) {
  std::ostringstream why;
  bool ok = true;
  std::size_t maps = 0;
  for (const auto& [name, f] : catalog_homeomorphisms()) {
    try {
      require_homeomorphism(f);
    } catch (const NotHomeomorphismError& e) {
      ok = false;
      why << name << " not certified: " << e.what() << "; ";
      continue;
    }
    ++maps;
    for (std::size_t n = 1; n <= 10; ++n) {
      const std::uint64_t v = phi(f, n);
      if (v != 1) {
        ok = false;
        why << "phi(" << name << "," << n << ")=" << v << "; ";
      }
    }
  }
  const PLMap tent = catalog::tent();
  for (std::size_t n = 1; n <= 12; ++n) {
    const std::uint64_t v = phi(tent, n);
    if (v != (std::uint64_t{1} << n)) {
      ok = false;
      why << "phi(tent," << n << ")=" << v << "; ";
    }
  }
  if (ok) why << maps << " certified homeomorphisms have phi=1 for n=1..10; phi(tent,n)=2^n for n=1..12";
  return {ok, why.str()};
}

// ---- 3: sandwich chain ----------------------------------------------------

struct ChainInstance {
  std::string system;
  std::size_t points;
  std::size_t n;
  double eps;
  std::size_t span_2e, cov_2e, span_e, cov_e, sep_e, span_h, cov_h, greedy_sep, greedy_span;

  std::string describe() const {
    std::ostringstream s;
    s << system << " |P|=" << points << " n=" << n << " eps=" << eps << ": span(2e)=" << span_2e
      << " cov(2e)=" << cov_2e << " span(e)=" << span_e << " cov(e)=" << cov_e << " sep(e)=" << sep_e
      << " span(e/2)=" << span_h << " cov(e/2)=" << cov_h << " greedy_sep=" << greedy_sep;
    return s.str();
  }
};

GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<long> den(1, 64);
  const EdgeId e = static_cast<EdgeId>(edge(rng));
  const long d = den(rng);
  std::uniform_int_distribution<long> num(0, d);
  Rational t(num(rng), d);
  t.canonicalize();
  return g.canonical(e, t);
}

std::vector<ChainInstance> chain_instances(std::uint64_t seed) {
  static const char* kSystems[] = {"pl_contract", "tent", "rotation(golden)", "flip", "tripod_contract",
                                   "lollipop_contract", "tripod_rotate"};
  std::mt19937_64 rng(seed);
  std::vector<ChainInstance> out;
  for (int i = 0; i < 50; ++i) {
    const std::string name = kSystems[std::uniform_int_distribution<int>(0, 6)(rng)];
    const auto system = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name(name));
    const std::size_t count = std::uniform_int_distribution<std::size_t>(4, kCoverOracleCap)(rng);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
    const double eps = std::ldexp(1.0, -std::uniform_int_distribution<int>(1, 4)(rng));
    std::vector<SystemPoint> points;
    for (std::size_t k = 0; k < count; ++k) points.push_back({random_point(system->graph(), rng)});
    const auto table = system->orbit_table_for(points, n);
    ChainInstance c{name, table->size(), n, eps, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    c.span_2e = exact_span(*table, n, 2 * eps);
    c.cov_2e = exact_cov(*table, n, 2 * eps);
    c.span_e = exact_span(*table, n, eps);
    c.cov_e = exact_cov(*table, n, eps);
    c.sep_e = exact_sep(*table, n, eps);
    c.span_h = exact_span(*table, n, eps / 2);
    c.cov_h = exact_cov(*table, n, eps / 2);
    c.greedy_sep = greedy_separated(*table, n, eps).size();
    c.greedy_span = greedy_spanning(*table, n, eps);
    out.push_back(c);
  }
  return out;
}

bool greedy_sound(const ChainInstance& c) {
  return c.span_e <= c.greedy_sep && c.greedy_sep <= c.sep_e && c.greedy_span >= c.span_e;
}

// The chain exactly as stated: span(2e) <= cov(e) <= sep(e) <= cov(e/2) <= span(e/2).
Outcome literal_chain(Run& run) {
  std::size_t bad = 0;
  std::string witness;
  for (const ChainInstance& c : chain_instances(run.seed)) {
    const bool chain = c.span_2e <= c.cov_e && c.cov_e <= c.sep_e && c.sep_e <= c.cov_h && c.cov_h <= c.span_h;
    if (!chain || !greedy_sound(c)) {
      if (bad++ == 0) witness = c.describe();
    }
  }
  if (bad == 0) return {true, "50 instances satisfy the chain as stated"};
  return {false, std::to_string(bad) + "/50 instances violate the chain as stated; first: " + witness};
}

// The ordering that holds for any finite P with ball centres in P:
// cov(2e) <= span(e) <= sep(e) <= span(e/2) <= cov(e/2).
Outcome corrected_chain(Run& run) {
  std::size_t bad = 0;
  std::string witness;
  for (const ChainInstance& c : chain_instances(run.seed)) {
    const bool chain = c.cov_2e <= c.span_e && c.span_e <= c.sep_e && c.sep_e <= c.span_h && c.span_h <= c.cov_h;
    if (!chain || !greedy_sound(c)) {
      if (bad++ == 0) witness = c.describe();
    }
  }
  if (bad == 0) return {true, "50 instances: cov(2e)<=span(e)<=sep(e)<=span(e/2)<=cov(e/2), span<=greedy_sep<=sep"};
  return {false, std::to_string(bad) + "/50 instances violate; first: " + witness};
}

// ---- exponent ranges ------------------------------------------------------

struct RangeCheck {
  std::string system;
  EstimationProtocol protocol;
  std::string role;
  double low;
  double high;
};

Outcome ranges(Run& run, const std::vector<RangeCheck>& checks) {
  bool ok = true;
  std::ostringstream why;
  for (const RangeCheck& c : checks) {
    const double x = run.estimate(c.system, c.protocol, c.role).exponent;
    const bool in = x >= c.low && x <= c.high;
    ok = ok && in;
    why << c.system << "=" << fixed(x) << (in ? "" : " (outside [" + fixed(c.low, 2) + "," + fixed(c.high, 2) + "])")
        << "; ";
  }
  std::string text = why.str();
  if (text.size() >= 2) text.resize(text.size() - 2);
  return {ok, text};
}

const char* kZeroEntropy[] = {"identity",
                              "rotation(golden)",
                              "tripod_rotate",
                              "pow(identity,2)",
                              "conj(identity,bend)",
                              "pow(rotation(golden),2)",
                              "conj(rotation(golden),bend)",
                              "pow(tripod_rotate,2)",
                              "pow(tripod_rotate,3)",
                              "conj(tripod_rotate,bend)"};

const char* kWandering[] = {"pl_contract", "tripod_contract", "lollipop_contract"};

Outcome zero_entropy(Run& run) {
  std::vector<RangeCheck> checks;
  for (const char* s : kZeroEntropy) checks.push_back({s, zero_entropy_protocol(), "zero", -1e9, run.tolerance});
  return ranges(run, checks);
}

Outcome wandering(Run& run) {
  std::vector<RangeCheck> checks;
  for (const char* s : kWandering) checks.push_back({s, wandering_protocol(), "wandering", 0.8, 1.1});
  return ranges(run, checks);
}

Outcome kato(Run& run) {
  struct Entry {
    std::string system;
    bool wanders;
  };
  const std::vector<Entry> entries = {{"identity", false},        {"flip", false},
                                      {"rotation(golden)", false}, {"tripod_rotate", false},
                                      {"bend", true},              {"pl_contract", true},
                                      {"tripod_contract", true},   {"lollipop_contract", true}};
  bool ok = true;
  std::ostringstream why;
  for (const Entry& e : entries) {
    const EstimationProtocol p = e.wanders ? wandering_protocol() : zero_entropy_protocol();
    const double x = run.estimate(e.system, p, e.wanders ? "wandering" : "zero").exponent;
    const KatoReport k = kato_bound_check(catalog::map_by_name(e.system), x, p);
    const bool in = x <= 1.0 + run.tolerance && k.satisfied;
    ok = ok && in;
    why << e.system << "=" << fixed(x) << " (phi bound " << (k.bound_infinite ? std::string("inf") : fixed(k.bound, 2))
        << ")" << (in ? "" : " FAIL") << "; ";
  }
  std::string text = why.str();
  text.resize(text.size() - 2);
  return {ok, text};
}

Outcome product(Run& run) {
  return ranges(run, {{"prod(pl_contract,pl_contract)", product_protocol(), "product", 1.6, 2.3},
                      {"prod(rotation(golden),pl_contract)", product_protocol(), "product", 0.8, 1.2}});
}

Outcome invariance(Run& run) {
  const double base = run.estimate("pl_contract", invariance_protocol(), "invariance").exponent;
  bool ok = true;
  std::ostringstream why;
  why << "pl_contract=" << fixed(base);
  for (const char* s : {"pow(pl_contract,2)", "conj(pl_contract,bend)"}) {
    const double x = run.estimate(s, invariance_protocol(), "invariance").exponent;
    const double delta = std::abs(x - base);
    ok = ok && delta <= run.tolerance;
    why << "; " << s << "=" << fixed(x) << " |delta|=" << fixed(delta);
  }
  return {ok, why.str()};
}

Outcome factor_identity(Run& run) {
  bool ok = true;
  std::ostringstream why;
  std::mt19937_64 rng(run.seed);
  for (const char* name : {"pl_contract", "tent"}) {
    const PLMap f = catalog::map_by_name(name);
    std::vector<std::vector<GraphPoint>> tuples;
    for (int i = 0; i < 1000; ++i) tuples.push_back({random_point(f.domain(), rng), random_point(f.domain(), rng)});
    if (std::string(name) == "tent") tuples.push_back({GraphPoint{0, Rational(1, 4)}, GraphPoint{0, Rational(3, 4)}});
    const FactorCheck c = factor_map_check(f, 2, tuples);
    ok = ok && c.holds;
    why << name << ": " << c.checked << " tuples " << (c.holds ? "hold" : "FAIL at " + to_string(*c.witness)) << "; ";
  }
  std::string text = why.str();
  text.resize(text.size() - 2);
  return {ok, text};
}

Outcome symmetric_growth(Run& run) {
  const Outcome f2 = ranges(run, {{"F2(pl_contract)", symmetric_protocol(), "symmetric", 1.6, 2.3},
                                  {"F2(tripod_rotate)", symmetric_protocol(), "symmetric", -1e9, 0.2}});
  auto base = std::dynamic_pointer_cast<const GraphSystem>(catalog::system_by_name("pl_contract"));
  const HyperspaceTrend trend = hyperspace_growth_trend(base, 3, trend_protocol());
  std::ostringstream why;
  why << f2.detail << "; trend F1..F3(pl_contract)=";
  for (std::size_t i = 0; i < trend.rows.size(); ++i) {
    why << (i ? "," : "") << fixed(trend.rows[i].report.exponent);
    run.reports.push_back(trend.rows[i].report);
  }
  why << " min step " << fixed(trend.min_step) << (trend.increasing ? "" : " (< 0.6)");
  return {f2.ok && trend.increasing, why.str()};
}

Outcome wandering_classifier(Run& run) {
  bool ok = true;
  std::ostringstream why;
  std::mt19937_64 rng(run.seed);
  std::size_t checked = 0;
  for (const char* name : {"identity", "pl_contract", "flip", "bend"}) {
    const PLMap f = catalog::map_by_name(name);
    const MetricGraph& g = f.domain();
    const HomeoCertificate cert = require_homeomorphism(f);
    // Orientation read off the endpoint images; the Fix-gap oracle evaluates
    // f (or f o f) pointwise.
    const bool preserving = f.apply(g.vertex_point(0)) == g.vertex_point(0);
    std::vector<GraphPoint> points = g.sample_grid(Rational(1, 64));
    for (int i = 0; i < 100; ++i) points.push_back(random_point(g, rng));
    for (const GraphPoint& p : points) {
      const WanderingVerdict v = wandering_status(f, cert, p);
      const GraphPoint image = preserving ? f.apply(p) : f.apply(f.apply(p));
      const Wandering expected = image == g.canonical(p) ? Wandering::nonwandering : Wandering::wandering;
      bool good = v.exact && v.status == expected;
      if (std::string(name) == "identity") good = good && v.status == Wandering::nonwandering;
      if (std::string(name) == "pl_contract" && p.t > 0 && p.t < 1) good = good && v.status == Wandering::wandering;
      ++checked;
      if (!good) {
        ok = false;
        why << name << " at " << to_string(SystemPoint{p}) << ": " << to_string(v.status) << "; ";
      }
    }
  }
  if (ok) why << checked << " points agree with the fixed-point gap rule (identity, pl_contract, flip, bend)";
  return {ok, why.str()};
}

std::string csv_text(const std::vector<GrowthReport>& reports) {
  std::ostringstream out;
  write_counts_csv(out, reports);
  return out.str();
}

Outcome determinism(Run& run) {
  // Two independent passes over fresh systems; CSVs and oracle tables compared byte for byte.
  auto pass = [&]() {
    std::vector<GrowthReport> reports;
    reports.push_back(growth_exponent(*catalog::system_by_name("pl_contract"), invariance_protocol()));
    reports.push_back(growth_exponent(*catalog::system_by_name("prod(rotation(golden),pl_contract)"), product_protocol()));
    reports.push_back(growth_exponent(*catalog::system_by_name("F2(tripod_rotate)"), symmetric_protocol()));
    std::string text = csv_text(reports);
    for (const ChainInstance& c : chain_instances(run.seed)) text += c.describe() + "\n";
    return text;
  };
  const std::string first = pass();
  const std::string second = pass();
  if (first == second) return {true, "two runs produced identical output (" + std::to_string(first.size()) + " bytes)"};
  std::size_t at = 0;
  while (at < first.size() && at < second.size() && first[at] == second[at]) ++at;
  return {false, "outputs differ at byte " + std::to_string(at)};
}

struct Criterion {
  const char* id;
  const char* title;
  std::function<Outcome(Run&)> body;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {"1", "exact lap numbers", lap_numbers},
      {"2", "exact phi", exact_phi},
      {"3a", "sandwich chain as stated", literal_chain},
      {"3b", "sandwich chain, corrected order", corrected_chain},
      {"4", "zero-entropy systems", zero_entropy},
      {"5", "wandering homeomorphisms", wandering},
      {"6", "phi bound on catalog homeomorphisms", kato},
      {"7", "product formula", product},
      {"8", "power and conjugacy invariance", invariance},
      {"9", "factor identity", factor_identity},
      {"10", "symmetric-product growth", symmetric_growth},
      {"11", "wandering classifier", wandering_classifier},
      {"12", "determinism", determinism},
  };
  return list;
}

bool selected(const std::string& filter, const std::string& id) {
  if (filter.empty()) return true;
  std::stringstream in(filter);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item == id || (item.size() < id.size() && id.rfind(item, 0) == 0 && !std::isdigit(id[item.size()])))
      return true;
  }
  return false;
}

}  // namespace

EstimationProtocol zero_entropy_protocol() { return EstimationProtocol{}; }
EstimationProtocol wandering_protocol() { return with({3, 4, 5}, 0, 9); }
EstimationProtocol invariance_protocol() { return with({3, 4, 5}, 0, 8); }
EstimationProtocol product_protocol() { return with({2, 3}, 0, 7, Rational(1, 2)); }
EstimationProtocol symmetric_protocol() { return with({2, 3}, 0, 6, Rational(1, 2)); }
EstimationProtocol trend_protocol() {
  EstimationProtocol p = with({2}, 0, 5, Rational(1, 2));
  p.window = std::make_pair(2, 5);
  p.spanning = false;
  return p;
}

std::vector<std::string> criterion_ids() {
  std::vector<std::string> out;
  for (const Criterion& c : criteria()) out.emplace_back(c.id);
  return out;
}

std::vector<CriterionResult> acceptance_suite(const AcceptanceOptions& options) {
  Run run{options.seed, options.tolerance, {}, {}};
  std::vector<CriterionResult> out;
  if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);
  for (const Criterion& c : criteria()) {
    if (!selected(options.filter, c.id)) continue;
    CriterionResult r{c.id, c.title, Verdict::skip, "", 0.0};
    run.reports.clear();
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.body(run);
      r.verdict = o.ok ? Verdict::pass : Verdict::fail;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.verdict = Verdict::fail;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!options.out_dir.empty() && !run.reports.empty()) {
      std::ofstream csv(options.out_dir / ("criterion_" + r.id + ".csv"), std::ios::binary);
      write_counts_csv(csv, run.reports);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %-3s %-36s (%.1fs) ", to_string(r.verdict), r.id.c_str(), r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

}  // namespace polyent
