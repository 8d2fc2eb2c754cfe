#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sfol/acceptance.hpp"
#include "sfol/harness.hpp"

namespace {

// --set key=value or key=v1,v2,... (comma lists expand into grids)
std::map<std::string, std::vector<double>> parse_sets(const std::vector<std::string>& sets) {
  std::map<std::string, std::vector<double>> grid;
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
    }
    const std::string key = kv.substr(0, eq);
    std::stringstream vals(kv.substr(eq + 1));
    std::string item;
    while (std::getline(vals, item, ',')) {
      grid[key].push_back(std::stod(item));
    }
  }
  return grid;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scale-free comparator-adaptive online learners and their adversaries"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", out_file, kind, factors_arg = "1e-6,1e-3,1e3,1e6";
  std::vector<std::string> sets;

  auto* run = app.add_subcommand("run", "run a scenario config against every seed");
  run->add_option("--config", config_path, "scenario JSON file")->required();
  auto* run_out = run->add_option("--out", out_dir, "output directory for CSV/JSON artifacts");

  auto* bounds = app.add_subcommand("bounds", "tabulate a bound over a parameter grid");
  bounds->add_option("--kind", kind, "bound name (thm1, thm3, thm10, thm13param, prop20, ...)")
      ->required();
  bounds->add_option("--set", sets, "key=value or key=v1,v2,... (repeatable)");

  auto* inv = app.add_subcommand("invariance", "paired-run scale invariance check");
  inv->add_option("--config", config_path, "scenario JSON file")->required();
  inv->add_option("--factors", factors_arg, "comma-separated scaling factors");

  auto* verify = app.add_subcommand("verify", "run the full acceptance suite");
  verify->add_option("--out", out_dir, "artifacts directory");

  auto* adversary = app.add_subcommand("adversary", "generate an adversary stream as CSV");
  adversary->add_option("--kind", kind, "adversary name")->required();
  adversary->add_option("--set", sets, "key=value parameters (T, d, seed, U, X, Y, ...)");
  adversary->add_option("--out", out_file, "output CSV path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const sfol::ScenarioConfig cfg = sfol::parse_scenario_config(slurp(config_path));
      // --out wins over the config's own output_path
      const std::string dir =
          (run_out->count() == 0 && !cfg.output_path.empty()) ? cfg.output_path : out_dir;
      const sfol::RunReport report = sfol::run_scenario(cfg, dir);
      for (const auto& s : report.seeds) {
        std::cout << report.scenario << " seed " << s.seed << ": cum_regret "
                  << sfol::format_double(s.cum_regret);
        if (s.bound_value) {
          std::cout << ", bound " << sfol::format_double(*s.bound_value) << ", "
                    << (s.bound_satisfied ? "satisfied" : "VIOLATED");
        }
        std::cout << '\n';
      }
      return 0;
    }
    if (bounds->parsed()) {
      std::cout << sfol::bound_report(kind, parse_sets(sets));
      return 0;
    }
    if (inv->parsed()) {
      const sfol::ScenarioConfig cfg = sfol::parse_scenario_config(slurp(config_path));
      std::vector<double> factors;
      std::stringstream fs(factors_arg);
      std::string item;
      while (std::getline(fs, item, ',')) factors.push_back(std::stod(item));
      const double diff = sfol::check_scale_invariance(cfg, factors);
      std::cout << "max_scale_rel_diff " << sfol::format_double(diff) << '\n';
      return diff <= 1e-8 ? 0 : 1;
    }
    if (verify->parsed()) {
      return sfol::acceptance::run_all(out_dir, std::cout) == 0 ? 0 : 1;
    }
    if (adversary->parsed()) {
      const auto grid = parse_sets(sets);
      const auto scalar = [&](const std::string& key, double fallback) {
        auto it = grid.find(key);
        return it == grid.end() ? fallback : it->second.front();
      };
      sfol::ComponentRef ref;
      ref.name = kind;
      for (const auto& [k, vs] : grid) ref.params[k] = vs.front();
      const auto stream =
          sfol::make_stream(ref, static_cast<int>(scalar("T", 100)),
                            static_cast<int>(scalar("d", 1)),
                            static_cast<std::uint64_t>(scalar("seed", 1)));
      sfol::write_stream_csv(stream, out_file);
      std::cout << "wrote " << out_file << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
