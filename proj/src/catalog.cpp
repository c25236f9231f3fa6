#include <algorithm>
#include <cctype>
#include <cmath>
#include <optional>

#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"

namespace polyent::catalog {

namespace {

Rational q(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// pl_contract's profile t -> t/2 on [0,1/2], (3t-1)/2 on [1/2,1], on edge e.
std::vector<Piece> contract_profile(EdgeId e) {
  return {Piece{q(0), q(1, 2), e, q(1, 2), q(0)}, Piece{q(1, 2), q(1), e, q(3, 2), q(-1, 2)}};
}

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out += c;
  }
  return out;
}

}  // namespace

std::shared_ptr<const MetricGraph> unit_interval() {
  static const auto g = std::make_shared<const MetricGraph>(MetricGraph::interval(1));
  return g;
}

std::shared_ptr<const MetricGraph> unit_circle() {
  static const auto g = std::make_shared<const MetricGraph>(MetricGraph::circle(1));
  return g;
}

std::shared_ptr<const MetricGraph> tripod() {
  static const auto g = std::make_shared<const MetricGraph>(
      MetricGraph::from_edges({"c", "a", "b", "d"}, {{"c", "a", 1}, {"c", "b", 1}, {"c", "d", 1}}));
  return g;
}

std::shared_ptr<const MetricGraph> lollipop() {
  static const auto g =
      std::make_shared<const MetricGraph>(MetricGraph::from_edges({"j", "e"}, {{"j", "j", 1}, {"j", "e", 1}}));
  return g;
}

PLMap identity() { return PLMap::identity(unit_interval()); }

PLMap tent() {
  return PLMap(unit_interval(), {{Piece{q(0), q(1, 2), 0, q(2), q(0)}, Piece{q(1, 2), q(1), 0, q(-2), q(2)}}});
}

PLMap pl_contract() { return PLMap(unit_interval(), {contract_profile(0)}); }

PLMap flip() { return PLMap(unit_interval(), {{Piece{q(0), q(1), 0, q(-1), q(1)}}}); }

PLMap rotation(const Rational& angle) {
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), angle.get_num_mpz_t(), angle.get_den_mpz_t());
  Rational theta = angle - Rational(whole);
  theta.canonicalize();
  if (theta == 0) return PLMap::identity(unit_circle());
  const Rational cut = 1 - theta;
  return PLMap(unit_circle(), {{Piece{q(0), cut, 0, q(1), theta}, Piece{cut, q(1), 0, q(1), theta - 1}}});
}

PLMap tripod_rotate() {
  std::vector<std::vector<Piece>> pieces;
  for (EdgeId e = 0; e < 3; ++e) pieces.push_back({Piece{q(0), q(1), (e + 1) % 3, q(1), q(0)}});
  return PLMap(tripod(), std::move(pieces));
}

PLMap tripod_contract() { return PLMap(tripod(), {contract_profile(0), contract_profile(1), contract_profile(2)}); }

PLMap lollipop_contract() { return PLMap(lollipop(), {contract_profile(0), contract_profile(1)}); }

PLMap bend(std::shared_ptr<const MetricGraph> graph) {
  std::vector<std::vector<Piece>> pieces;
  for (EdgeId e = 0; e < graph->edge_count(); ++e)
    pieces.push_back({Piece{q(0), q(1, 2), e, q(3, 2), q(0)}, Piece{q(1, 2), q(1), e, q(1, 2), q(1, 2)}});
  return PLMap(std::move(graph), std::move(pieces));
}

Rational parse_angle(std::string_view text) {
  if (text == "phi" || text == "golden") return rational_from_double((std::sqrt(5.0) - 1.0) / 2.0);
  return parse_rational(text);
}

namespace {

struct NamedMap {
  const char* name;
  PLMap (*make)();
};

const NamedMap kMaps[] = {
    {"identity", identity},           {"tent", tent},
    {"pl_contract", pl_contract},     {"flip", flip},
    {"tripod_rotate", tripod_rotate}, {"tripod_contract", tripod_contract},
    {"lollipop_contract", lollipop_contract},
};

bool starts_with_call(std::string_view text, std::string_view head) {
  return text.size() > head.size() + 1 && text.substr(0, head.size()) == head && text[head.size()] == '(' &&
         text.back() == ')';
}

}  // namespace

bool is_map_name(std::string_view name) {
  for (const NamedMap& m : kMaps) {
    if (name == m.name) return true;
  }
  return name == "bend" || starts_with_call(name, "rotation");
}

PLMap map_by_name(std::string_view raw) {
  const std::string name = strip_spaces(raw);
  for (const NamedMap& m : kMaps) {
    if (name == m.name) return m.make();
  }
  if (name == "bend") return bend(unit_interval());
  if (starts_with_call(name, "rotation")) {
    const std::string_view arg = std::string_view(name).substr(9, name.size() - 10);
    return rotation(parse_angle(arg));
  }
  throw ConfigError("unknown map '" + name + "'");
}

std::vector<std::string> map_names() {
  std::vector<std::string> out;
  for (const NamedMap& m : kMaps) out.emplace_back(m.name);
  out.emplace_back("rotation(<angle>)");
  out.emplace_back("bend");
  return out;
}

namespace {

// Splits "head(a,b)" into head and top-level arguments.
struct Call {
  std::string head;
  std::vector<std::string> args;
};

std::optional<Call> parse_call(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') return std::nullopt;
  Call call{text.substr(0, open), {}};
  int depth = 0;
  std::string current;
  for (std::size_t i = open + 1; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')' && --depth < 0) throw ConfigError("unbalanced parentheses in '" + text + "'");
    if (c == ',' && depth == 0) {
      call.args.push_back(current);
      current.clear();
      continue;
    }
    current += c;
  }
  if (depth != 0) throw ConfigError("unbalanced parentheses in '" + text + "'");
  call.args.push_back(current);
  return call;
}

std::size_t parse_count(const std::string& text, const std::string& where) {
  if (text.empty() || text.size() > 6 || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ConfigError("expected a positive integer in " + where);
  const std::size_t k = std::stoul(text);
  if (k == 0) throw ConfigError("expected a positive integer in " + where);
  return k;
}

std::shared_ptr<const GraphSystem> as_graph_system(const SystemPtr& s, const std::string& where) {
  auto g = std::dynamic_pointer_cast<const GraphSystem>(s);
  if (!g) throw ConfigError(where + " needs a graph system argument");
  return g;
}

SystemPtr power_of(const SystemPtr& s, std::size_t k, const std::string& name) {
  if (auto g = std::dynamic_pointer_cast<const GraphSystem>(s)) return g->power(k, name);
  if (auto p = std::dynamic_pointer_cast<const ProductSystem>(s)) {
    return std::make_shared<ProductSystem>(power_of(p->first(), k, "pow(" + p->first()->descriptor() + "," + std::to_string(k) + ")"),
                                           power_of(p->second(), k, "pow(" + p->second()->descriptor() + "," + std::to_string(k) + ")"));
  }
  if (auto f = std::dynamic_pointer_cast<const SymmetricProductSystem>(s)) {
    auto base = f->base_system()->power(k, "pow(" + f->base().descriptor() + "," + std::to_string(k) + ")");
    return std::make_shared<SymmetricProductSystem>(base, f->power());
  }
  throw ConfigError("pow: unsupported system " + s->descriptor());
}

}  // namespace

SystemPtr system_by_name(std::string_view raw) {
  const std::string name = strip_spaces(raw);
  if (name.empty()) throw ConfigError("empty system name");
  if (is_map_name(name)) return std::make_shared<GraphSystem>(name, map_by_name(name));

  const auto call = parse_call(name);
  if (!call) throw ConfigError("unknown system '" + name + "'");
  const auto& [head, args] = *call;
  if (head == "prod") {
    if (args.size() != 2) throw ConfigError("prod takes two systems");
    return std::make_shared<ProductSystem>(system_by_name(args[0]), system_by_name(args[1]));
  }
  if (head == "pow") {
    if (args.size() != 2) throw ConfigError("pow takes a system and a positive integer");
    return power_of(system_by_name(args[0]), parse_count(args[1], name), name);
  }
  if (head == "conj") {
    if (args.size() != 2) throw ConfigError("conj takes a system and a homeomorphism name");
    auto base = as_graph_system(system_by_name(args[0]), "conj");
    const PLMap h = args[1] == "bend" ? bend(base->map().graph()) : map_by_name(args[1]);
    if (!h.same_domain(base->map())) throw ConfigError("conj: '" + args[1] + "' acts on a different graph");
    try {
      return base->conjugate(h, name);
    } catch (const NotHomeomorphismError& e) {
      throw ConfigError(std::string("conj: ") + e.what());
    }
  }
  if (head.size() == 2 && head[0] == 'F' && std::isdigit(static_cast<unsigned char>(head[1]))) {
    if (args.size() != 1) throw ConfigError(head + " takes one system");
    const std::size_t power = static_cast<std::size_t>(head[1] - '0');
    return std::make_shared<SymmetricProductSystem>(as_graph_system(system_by_name(args[0]), head), power);
  }
  throw ConfigError("unknown system '" + name + "'");
}

}  // namespace polyent::catalog
