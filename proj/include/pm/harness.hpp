// Experiment orchestration: seeded runs of a strategy against an environment,
// replicated benchmarks with summary statistics, and the classifier
// monitoring protocol with its verification budgets.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "pm/env.hpp"
#include "pm/randomization.hpp"
#include "pm/stats.hpp"

namespace pm {

struct RunRecord {
  std::uint64_t seed = 0;
  long horizon = 0;
  nlohmann::json config;           // strategy + env snapshot
  std::vector<double> cum_regret;  // one entry per round
  double final_regret = 0.0;
  long confidence_failures = 0;
  std::vector<int> actions;  // only when requested
  double wall_ms = 0.0;
};

struct RunOptions {
  bool store_actions = false;
};

// One deterministic run: (configs, horizon, seed) fully determine the record.
// Strategy config: {"strategy":"cbp"|"randcbp"|"cbpside"|"randcbpside"|
// "uniform_random"|"fixed", "alpha":…, "lambda":…, "K":…, "eps":…,
// "sigma":…, "A":…, "action":…}. Environment config:
// {"env":"bernoulli", "game":<name|spec>, "tau":…, "p":[…] | "instance":
// "imbalanced"|"balanced"} or {"env":"linear", "game":…, "d":…,
// "theta":"const:<v>"|"profile"|[[…]], "contexts":"iid_uniform"|"one_hot"}.
// Instance environments redraw their parameters per run from the seed.
RunRecord run_game(const nlohmann::json& strategy_cfg, const nlohmann::json& env_cfg,
                   long horizon, std::uint64_t seed, const RunOptions& opts = {});

// Runs seeds base_seed .. base_seed+n_runs-1, optionally across threads.
// Results are ordered by run index regardless of scheduling.
std::vector<RunRecord> replicate(const nlohmann::json& strategy_cfg, const nlohmann::json& env_cfg,
                                 long horizon, int n_runs, std::uint64_t base_seed,
                                 int n_threads = 1, const RunOptions& opts = {});

struct StrategySummary {
  std::string name;
  int runs = 0;
  double mean_final = 0.0;
  double std_final = 0.0;
  double median_final = 0.0;
  double ci99_half = 0.0;
  int wins = 0;                    // lowest final regret, ties counted for all
  double welch_p_vs_ref = -1.0;    // negative for the reference row
  std::vector<double> finals;
  std::vector<double> mean_curve;  // mean cumulative regret per round
};

struct ExperimentSummary {
  std::string reference;
  std::vector<StrategySummary> strategies;
};

ExperimentSummary summarize(
    const std::vector<std::pair<std::string, std::vector<RunRecord>>>& by_strategy,
    const std::string& reference);

// CSV of the regret curves: columns strategy,run,round,cum_regret; rounds are
// downsampled to multiples of `stride` plus the final round. Runs and rounds
// are 1-based in the file.
void write_curves_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, std::vector<RunRecord>>>& by_strategy,
                      long stride);

nlohmann::json summary_json(const ExperimentSummary& summary);

// ---- classifier monitoring ----

enum class MonitorFamily { kExploreFully, kCbp, kRandCbp };

MonitorFamily monitor_family_from_string(const std::string& name);
const char* to_string(MonitorFamily f);

struct MonitorConfig {
  int C = 10;
  double tau = 0.1;
  ClassBalance balance = ClassBalance::kBalanced;
  ErrorProfile errors = ErrorProfile::kUniform;
  bool diagonal_complement = false;
  double alpha = 1.01;
  RandomizationConfig rand;  // used by the randomized family
};

struct MonitorRow {
  double tau = 0.0;
  long budget_per_class = 0;
  long budget_total = 0;
  long verifications = 0;
  double f1 = 1.0;
  std::vector<int> flagged;  // 1-based predicted classes flagged
  std::vector<int> truth;    // 1-based classes whose true error rate >= tau
};

// One seed of the protocol: draw a classifier, run one detection-game
// instance per predicted class for the per-class budget, flag classes whose
// verified error frequency reaches tau, and score F1 against the classes
// whose true rate does. Empty-vs-empty flag sets score 1.
MonitorRow monitor_run(MonitorFamily family, const MonitorConfig& cfg, std::uint64_t seed);

struct MonitorReport {
  std::string family;
  double tau = 0.0;
  long budget_total = 0;
  int seeds = 0;
  double f1_mean = 0.0, f1_median = 0.0, f1_std = 0.0;
  double verif_mean = 0.0, verif_median = 0.0, verif_std = 0.0;
};

MonitorReport monitor_aggregate(MonitorFamily family, const MonitorConfig& cfg, int n_seeds,
                                std::uint64_t base_seed);

nlohmann::json monitor_report_json(const std::vector<MonitorReport>& rows);

}  // namespace pm
