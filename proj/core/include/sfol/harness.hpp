#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

#include "sfol/adversaries.hpp"
#include "sfol/kernels.hpp"
#include "sfol/learner.hpp"
#include "sfol/types.hpp"

namespace sfol {

/// A named component (learner or data source) with numeric parameters and an
/// optional kernel spec.
struct ComponentRef {
  std::string name;
  std::string kernel;  // "", "linear", "rbf", "matern"
  std::map<std::string, double> params;
};

struct ScenarioConfig {
  std::string name;
  ComponentRef learner;
  ComponentRef adversary;
  int T = 0;
  int d = 1;
  int K = 2;
  std::vector<std::uint64_t> seeds;
  bool comparator_auto = true;
  double comparator_U = std::numeric_limits<double>::infinity();
  Vector comparator_theta;  // explicit mode
  std::string bound_kind;   // empty: no bound column
  std::map<std::string, double> bound_params;
  std::string invariance;  // "", "x", "y", "kernel"
  std::string output_path;
};

/// Parses and validates a config document. Unknown keys anywhere are errors.
ScenarioConfig parse_scenario_config(const std::string& json_text);

struct SeedOutcome {
  std::uint64_t seed = 0;
  double cum_regret = 0.0;
  std::optional<double> bound_value;
  bool bound_satisfied = true;
};

struct RunReport {
  std::string scenario;
  std::vector<SeedOutcome> seeds;
  std::optional<double> max_scale_rel_diff;
};

/// Runs every seed of the scenario, writing one CSV of per-round losses and
/// one JSON summary per seed under out_dir.
RunReport run_scenario(const ScenarioConfig& config, const std::string& out_dir);

/// Paired runs under each scaling factor; returns the maximum relative
/// deviation of the (de-scaled) predictions from the base run.
double check_scale_invariance(const ScenarioConfig& config, const std::vector<double>& factors);

/// Evaluates any bound display by name from named parameters. thm11 also
/// needs the realized kernel matrix.
double evaluate_bound(const std::string& kind, const std::map<std::string, double>& params,
                      const Matrix* kernel_matrix = nullptr);

/// Tabulates bound values over the cartesian product of the per-key value
/// lists. Returns a printable table.
std::string bound_report(const std::string& kind,
                         const std::map<std::string, std::vector<double>>& grid);

/// Learner / data source factories shared by the CLI and the test suites.
std::unique_ptr<ScalarLearner> make_scalar_learner(const ComponentRef& ref, int T, int d);
std::unique_ptr<ProbLearner> make_prob_learner(const ComponentRef& ref, int T, int d, int K);
bool is_scalar_learner_name(const std::string& name);
Kernel make_kernel(const ComponentRef& ref, int d);
AdversaryStream make_stream(const ComponentRef& adversary, int T, int d, std::uint64_t seed);

/// Writes an adversary stream as CSV (round, feature columns, response).
void write_stream_csv(const AdversaryStream& stream, const std::string& path);

/// Shortest round-trip decimal representation.
std::string format_double(double v);

/// The deterministic scenario battery behind `verify`: runs each scenario,
/// writes artifacts under out_dir, prints one pass/fail line per scenario.
/// Returns the number of failures.
int run_verify_suite(const std::string& out_dir, std::ostream& log);

}  // namespace sfol
