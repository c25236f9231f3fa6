#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "polyent/acceptance.hpp"
#include "polyent/catalog.hpp"
#include "polyent/errors.hpp"
#include "polyent/experiment.hpp"
#include "polyent/pl_map.hpp"

using namespace polyent;

namespace {

int run_command(const std::string& config_path, const std::string& out_dir, std::optional<std::uint64_t> seed) {
  ExperimentConfig config = load_config(config_path);
  if (!out_dir.empty()) config.out_dir = out_dir;
  if (seed) config.seed = *seed;
  const ExperimentResult result = run_experiment(config);
  for (const auto& path : result.csv_files) std::cout << "wrote " << path.string() << '\n';
  std::cout << "wrote " << (config.out_dir / "report.json").string() << '\n';
  std::cout << (result.satisfied ? "all checks satisfied" : "some checks failed") << '\n';
  return result.satisfied ? kExitOk : kExitCheckFailed;
}

int check_command(const std::string& suite, const AcceptanceOptions& options) {
  if (suite != "acceptance") throw ConfigError("unknown suite '" + suite + "'");
  bool all = true;
  std::size_t count = 0;
  for (const CriterionResult& r : acceptance_suite(options)) {
    std::cout << format_result_line(r) << std::endl;
    all = all && r.verdict != Verdict::fail;
    ++count;
  }
  if (count == 0) throw ConfigError("filter '" + options.filter + "' selects no criterion");
  return all ? kExitOk : kExitCheckFailed;
}

int lap_command(const std::string& name, std::size_t n) {
  const PLMap f = catalog::map_by_name(name);
  std::cout << "c_" << n << "(" << name << ") = " << lap_number(f, n) << '\n';
  return kExitOk;
}

int phi_command(const std::string& name, std::size_t n) {
  const PLMap f = catalog::map_by_name(name);
  std::cout << "phi(" << name << ", " << n << ") = " << phi(f, n) << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polynomial entropy of piecewise-linear maps on metric graphs"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed_value = 0;
  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", config_path, "JSON config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  auto* seed_opt = run->add_option("--seed", seed_value, "random seed (overrides the config)");

  std::string suite;
  AcceptanceOptions acceptance;
  std::string acceptance_out;
  auto* check = app.add_subcommand("check", "run a built-in check suite");
  check->add_option("--suite", suite, "suite name (acceptance)")->required();
  check->add_option("--filter", acceptance.filter, "comma-separated criterion ids");
  check->add_option("--seed", acceptance.seed, "random seed");
  check->add_option("--tolerance", acceptance.tolerance, "slope tolerance");
  check->add_option("--out", acceptance_out, "directory for per-criterion counts CSVs");

  std::string map_name;
  std::size_t n = 0;
  auto* lap = app.add_subcommand("lap", "lap number of an interval map iterate");
  lap->add_option("--map", map_name, "catalog map")->required();
  lap->add_option("--n", n, "iterate")->required()->check(CLI::PositiveNumber);
  auto* phi_cmd = app.add_subcommand("phi", "largest preimage component count of an iterate");
  phi_cmd->add_option("--map", map_name, "catalog map")->required();
  phi_cmd->add_option("--n", n, "iterate")->required()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      std::optional<std::uint64_t> seed;
      if (*seed_opt) seed = seed_value;
      return run_command(config_path, out_dir, seed);
    }
    if (*check) {
      acceptance.out_dir = acceptance_out;
      return check_command(suite, acceptance);
    }
    if (*lap) return lap_command(map_name, n);
    if (*phi_cmd) return phi_command(map_name, n);
  } catch (const ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << '\n';
    return kExitResource;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
