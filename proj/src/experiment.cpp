#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/experiment.hpp"
#include "polyent/hyperspace.hpp"
#include "polyent/systems.hpp"

namespace polyent {

using json = nlohmann::ordered_json;

const char* to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::growth: return "growth";
    case CheckKind::kato: return "kato";
    case CheckKind::lap: return "lap";
    case CheckKind::factor: return "factor";
    case CheckKind::hyperspace_trend: return "hyperspace_trend";
  }
  return "growth";
}

CheckKind check_kind_from_string(const std::string& text) {
  for (CheckKind k : {CheckKind::growth, CheckKind::kato, CheckKind::lap, CheckKind::factor,
                      CheckKind::hyperspace_trend}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown check '" + text + "'");
}

std::string file_stem(const std::string& descriptor) {
  std::string out;
  for (char c : descriptor) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? std::string("system") : out;
}

namespace {

Rational rational_field(const json& v, const std::string& what) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_number_float()) return parse_rational(v.dump());
  throw ConfigError(what + " must be a number or a \"p/q\" string");
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

PLMap inline_map(const json& spec) {
  const json& graph = spec.at("graph");
  reject_unknown(graph, {"vertices", "edges"}, "graph");
  std::vector<std::string> vertices = graph.at("vertices").get<std::vector<std::string>>();
  std::vector<EdgeSpec> edges;
  for (const json& e : graph.at("edges")) {
    if (!e.is_array() || e.size() != 3) throw ConfigError("graph edge must be [from, to, length]");
    edges.push_back(EdgeSpec{e[0].get<std::string>(), e[1].get<std::string>(), rational_field(e[2], "edge length")});
  }
  auto g = std::make_shared<const MetricGraph>(MetricGraph::from_edges(vertices, edges));
  std::vector<std::vector<Piece>> pieces;
  // Per edge, rows [t_i, target, a, b]: t -> a*t + b on [t_i, t_{i+1}], the last piece ending at 1.
  for (const json& edge_rows : spec.at("map")) {
    std::vector<Piece> row;
    for (const json& r : edge_rows) {
      if (!r.is_array() || r.size() != 4) throw ConfigError("map row must be [t_i, target, a, b]");
      const Rational start = rational_field(r[0], "breakpoint");
      if (!row.empty()) row.back().end = start;
      row.push_back(Piece{start, Rational(1), r[1].get<EdgeId>(), rational_field(r[2], "slope"),
                          rational_field(r[3], "offset")});
    }
    pieces.push_back(std::move(row));
  }
  PLMap f(std::move(g), std::move(pieces));
  const ValidityReport validity = validate_map(f);
  if (!validity.continuous) {
    std::string why = validity.violations.empty() ? std::string("not continuous") : validity.violations.front();
    throw ConfigError("inline map: " + why);
  }
  return f;
}

SystemSpec parse_system(const json& v) {
  SystemSpec spec;
  if (v.is_string()) {
    spec.name = v.get<std::string>();
    return spec;
  }
  if (!v.is_object()) throw ConfigError("system entry must be a name or an object");
  reject_unknown(v, {"name", "graph", "map", "expect"}, "system");
  spec.name = v.at("name").get<std::string>();
  if (v.contains("graph") != v.contains("map")) throw ConfigError("inline system needs both graph and map");
  if (v.contains("graph")) spec.inline_map = inline_map(v);
  if (v.contains("expect")) {
    const json& e = v.at("expect");
    if (!e.is_array() || e.size() != 2) throw ConfigError("expect must be [low, high]");
    spec.expected_exponent = std::make_pair(e[0].get<double>(), e[1].get<double>());
  }
  return spec;
}

EstimationProtocol parse_protocol(const json& v) {
  reject_unknown(v,
                 {"eps_exponents", "n_exponents", "mesh_factor", "window", "tolerance", "sample_budget", "orbit_budget",
                  "refine", "spanning", "kernel"},
                 "protocol");
  EstimationProtocol p;
  if (v.contains("eps_exponents")) p.eps_exponents = v.at("eps_exponents").get<std::vector<int>>();
  if (v.contains("n_exponents")) p.n_exponents = v.at("n_exponents").get<std::vector<int>>();
  if (v.contains("mesh_factor")) p.mesh_factor = rational_field(v.at("mesh_factor"), "mesh_factor");
  if (v.contains("window")) {
    const auto w = v.at("window").get<std::vector<int>>();
    if (w.size() != 2) throw ConfigError("window must be [low, high]");
    p.window = std::make_pair(w[0], w[1]);
  }
  if (v.contains("tolerance")) p.tolerance = v.at("tolerance").get<double>();
  if (v.contains("sample_budget")) p.sample_budget = v.at("sample_budget").get<std::size_t>();
  if (v.contains("orbit_budget")) p.orbit_budget = v.at("orbit_budget").get<std::size_t>();
  if (v.contains("refine")) p.refine = v.at("refine").get<bool>();
  if (v.contains("spanning")) p.spanning = v.at("spanning").get<bool>();
  if (v.contains("kernel")) {
    const auto k = v.at("kernel").get<std::string>();
    if (k == "indexed") p.kernel = KernelChoice::indexed;
    else if (k == "reference") p.kernel = KernelChoice::reference;
    else throw ConfigError("kernel must be 'indexed' or 'reference'");
  }
  p.validate();
  return p;
}

json fit_json(const SlopeFit& f) {
  return json{{"eps", f.eps},           {"slope", f.slope},     {"residual", f.residual},
              {"points", f.points},     {"degenerate", f.degenerate}, {"mesh", f.mesh},
              {"sample_size", f.sample_size}, {"notes", f.notes}};
}

json growth_json(const GrowthReport& r) {
  json fits = json::array();
  for (const SlopeFit& f : r.fits) fits.push_back(fit_json(f));
  return json{{"system", r.system},
              {"window", {r.window.first, r.window.second}},
              {"exponent", r.exponent},
              {"fits", fits},
              {"flags", r.flags}};
}

json skipped(const std::string& why) { return json{{"status", "skipped"}, {"reason", why}}; }

const char* status(bool ok) { return ok ? "satisfied" : "failed"; }

double json_number(double x) { return std::isfinite(x) ? x : (x > 0 ? 1e308 : -1e308); }

GraphPoint random_point(const MetricGraph& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<long> den(1, 256);
  const EdgeId e = static_cast<EdgeId>(edge(rng));
  const long d = den(rng);
  std::uniform_int_distribution<long> num(0, d);
  Rational t(num(rng), d);
  t.canonicalize();
  return g.canonical(e, t);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc,
                 {"systems", "protocol", "checks", "out", "seed", "lap_n", "factor_samples", "factor_power",
                  "trend_max_power"},
                 "config");
  ExperimentConfig c;
  try {
    if (!doc.contains("systems") || !doc.at("systems").is_array() || doc.at("systems").empty()) {
      throw ConfigError("config needs a nonempty 'systems' list");
    }
    for (const json& s : doc.at("systems")) c.systems.push_back(parse_system(s));
    if (doc.contains("protocol")) c.protocol = parse_protocol(doc.at("protocol"));
    if (doc.contains("checks")) {
      c.checks.clear();
      for (const json& k : doc.at("checks")) c.checks.push_back(check_kind_from_string(k.get<std::string>()));
    }
    if (doc.contains("out")) c.out_dir = doc.at("out").get<std::string>();
    if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("lap_n")) c.lap_n = doc.at("lap_n").get<std::size_t>();
    if (doc.contains("factor_samples")) c.factor_samples = doc.at("factor_samples").get<std::size_t>();
    if (doc.contains("factor_power")) c.factor_power = doc.at("factor_power").get<std::size_t>();
    if (doc.contains("trend_max_power")) c.trend_max_power = doc.at("trend_max_power").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field has the wrong type: ") + e.what());
  } catch (const Error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(e.what());
  }
  if (c.factor_power == 0) throw ConfigError("factor_power must be positive");
  if (c.trend_max_power == 0 || c.trend_max_power > kMaxSymmetricPower) throw ConfigError("trend_max_power must be 1..3");
  for (const SystemSpec& s : c.systems) resolve_system(s);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

SystemPtr resolve_system(const SystemSpec& spec) {
  if (spec.inline_map) return std::make_shared<GraphSystem>(spec.name, *spec.inline_map);
  try {
    return catalog::system_by_name(spec.name);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("cannot resolve system '" + spec.name + "': " + e.what());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.protocol.validate();
  std::filesystem::create_directories(config.out_dir);
  ExperimentResult result;
  json systems = json::array();

  for (std::size_t index = 0; index < config.systems.size(); ++index) {
    const SystemSpec& spec = config.systems[index];
    const SystemPtr system = resolve_system(spec);
    const auto* graph_system = dynamic_cast<const GraphSystem*>(system.get());
    std::vector<GrowthReport> csv_reports;
    std::optional<GrowthReport> growth;
    auto growth_report = [&]() -> const GrowthReport& {
      if (!growth) {
        growth = growth_exponent(*system, config.protocol);
        csv_reports.push_back(*growth);
      }
      return *growth;
    };

    json checks = json::object();
    bool all_ok = true;
    for (CheckKind kind : config.checks) {
      json entry;
      switch (kind) {
        case CheckKind::growth: {
          const GrowthReport& r = growth_report();
          bool ok = true;
          if (spec.expected_exponent) {
            ok = r.exponent >= spec.expected_exponent->first && r.exponent <= spec.expected_exponent->second;
          }
          entry = growth_json(r);
          if (spec.expected_exponent) entry["expected"] = {spec.expected_exponent->first, spec.expected_exponent->second};
          entry["status"] = status(ok);
          all_ok = all_ok && ok;
          break;
        }
        case CheckKind::kato: {
          if (!graph_system) {
            entry = skipped("needs a single PL map");
            break;
          }
          const KatoReport k = kato_bound_check(graph_system->system_map(), growth_report().exponent, config.protocol);
          json phis = json::array();
          for (const PhiSample& s : k.phi) phis.push_back({{"n", s.n}, {"phi", s.value}});
          entry = json{{"exponent_estimate", k.exponent_estimate},
                       {"phi", phis},
                       {"phi_slope", json_number(k.phi_slope)},
                       {"bound", json_number(k.bound)},
                       {"bound_infinite", k.bound_infinite},
                       {"status", status(k.satisfied)}};
          all_ok = all_ok && k.satisfied;
          break;
        }
        case CheckKind::lap: {
          if (!graph_system || graph_system->graph().kind() != GraphKind::interval) {
            entry = skipped("lap numbers are defined for interval maps");
            break;
          }
          const LapReport l =
              lap_bound_check(graph_system->system_map(), config.lap_n, growth_report().exponent, config.protocol);
          entry = json{{"n", l.n},
                       {"laps", l.laps ? json(*l.laps) : json(nullptr)},
                       {"bound", json_number(l.bound)},
                       {"exponent_estimate", l.exponent_estimate},
                       {"status", status(l.satisfied)}};
          all_ok = all_ok && l.satisfied;
          break;
        }
        case CheckKind::factor: {
          if (!graph_system) {
            entry = skipped("needs a single PL map");
            break;
          }
          std::mt19937_64 rng(config.seed + index);
          std::vector<std::vector<GraphPoint>> tuples(config.factor_samples);
          for (auto& t : tuples) {
            for (std::size_t i = 0; i < config.factor_power; ++i) t.push_back(random_point(graph_system->graph(), rng));
          }
          const FactorCheck f = factor_map_check(graph_system->system_map(), config.factor_power, tuples);
          entry = json{{"power", config.factor_power}, {"checked", f.checked}, {"status", status(f.holds)}};
          if (f.witness) entry["witness"] = to_string(*f.witness);
          all_ok = all_ok && f.holds;
          break;
        }
        case CheckKind::hyperspace_trend: {
          if (!graph_system) {
            entry = skipped("needs a graph system");
            break;
          }
          auto base = std::make_shared<GraphSystem>(graph_system->descriptor(), graph_system->system_map());
          const HyperspaceTrend t = hyperspace_growth_trend(base, config.trend_max_power, config.protocol);
          json rows = json::array();
          bool flat = true;
          for (const TrendRow& row : t.rows) {
            rows.push_back({{"power", row.power}, {"exponent", row.report.exponent}});
            flat = flat && row.report.exponent <= config.protocol.tolerance;
            csv_reports.push_back(row.report);
          }
          // Either the wandering picture (strict growth) or the equicontinuous one (all flat).
          const bool ok = t.increasing || flat;
          entry = json{{"rows", rows},
                       {"min_step", json_number(t.min_step)},
                       {"increasing", t.increasing},
                       {"note", t.note},
                       {"status", status(ok)}};
          all_ok = all_ok && ok;
          break;
        }
      }
      checks[to_string(kind)] = entry;
    }

    const auto csv_path = config.out_dir / (std::to_string(index) + "_" + file_stem(system->descriptor()) + ".csv");
    {
      std::ofstream out(csv_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write " + csv_path.string());
      write_counts_csv(out, csv_reports);
    }
    result.csv_files.push_back(csv_path);
    systems.push_back(json{{"name", spec.name},
                           {"descriptor", system->descriptor()},
                           {"csv", csv_path.filename().string()},
                           {"checks", checks},
                           {"satisfied", all_ok}});
    result.satisfied = result.satisfied && all_ok;
  }

  const EstimationProtocol& p = config.protocol;
  const auto window = p.regression_window();
  json protocol{{"eps_exponents", p.eps_exponents},
                {"n_exponents", p.n_exponents},
                {"mesh_factor", to_string(p.mesh_factor)},
                {"window", {window.first, window.second}},
                {"tolerance", p.tolerance},
                {"kernel", p.kernel == KernelChoice::indexed ? "indexed" : "reference"}};
  json report{{"seed", config.seed}, {"protocol", protocol}, {"systems", systems}, {"satisfied", result.satisfied}};
  result.report_json = report.dump(2) + "\n";
  std::ofstream out(config.out_dir / "report.json", std::ios::binary);
  out << result.report_json;
  return result;
}

}  // namespace polyent
