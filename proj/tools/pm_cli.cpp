// Command-line front end: game analysis, benchmark simulation, classifier
// monitoring, and report rendering over the library's JSON outputs.
#include <CLI/CLI.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <string>

#include "pm/harness.hpp"
#include "pm/structure.hpp"

namespace {

using nlohmann::json;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

pm::Game resolve_game(const std::string& spec, double tau) {
  if (spec == "apple_tasting" || spec == "label_efficient" || spec == "tau_detection")
    return pm::bundled_game(spec, tau);
  return pm::load_game_spec(read_json_file(spec));
}

void print_summary_table(const json& summary) {
  std::printf("%-16s %8s %12s %10s %12s %6s %12s\n", "strategy", "runs", "mean", "std",
              "median", "wins", "p_vs_ref");
  for (const auto& row : summary.at("strategies")) {
    std::string p = row.at("welch_p_vs_reference").is_null()
                        ? std::string("-")
                        : [&] {
                            char buf[32];
                            std::snprintf(buf, sizeof buf, "%.4g",
                                          row.at("welch_p_vs_reference").get<double>());
                            return std::string(buf);
                          }();
    std::printf("%-16s %8d %12.3f %10.3f %12.3f %6d %12s\n",
                row.at("strategy").get<std::string>().c_str(), row.at("runs").get<int>(),
                row.at("mean_final_regret").get<double>(), row.at("std_final_regret").get<double>(),
                row.at("median_final_regret").get<double>(), row.at("wins").get<int>(), p.c_str());
  }
}

void print_monitor_table(const json& rows) {
  std::printf("%-14s %8s %10s %10s %10s %12s %12s\n", "family", "tau", "budget", "f1_mean",
              "f1_median", "verif_mean", "verif_median");
  for (const auto& r : rows) {
    std::printf("%-14s %8.4g %10ld %10.3f %10.3f %12.1f %12.1f\n",
                r.at("family").get<std::string>().c_str(), r.at("tau").get<double>(),
                r.at("budget_total").get<long>(), r.at("f1_mean").get<double>(),
                r.at("f1_median").get<double>(), r.at("verifications_mean").get<double>(),
                r.at("verifications_median").get<double>());
  }
}

int cmd_analyze(const std::string& game_spec, double tau, const std::string& out) {
  pm::Game game = resolve_game(game_spec, tau);
  pm::GameStructure s = pm::analyze_game(game);
  std::string text = pm::structure_report(s).dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  return 0;
}

int cmd_simulate(const std::string& config_path, long seed, int runs, long horizon,
                 const std::string& out_dir, long stride, int threads) {
  json cfg = read_json_file(config_path);
  if (seed >= 0) cfg["seed"] = seed;
  if (runs > 0) cfg["runs"] = runs;
  if (horizon > 0) cfg["horizon"] = horizon;
  if (stride > 0) cfg["stride"] = stride;

  const json& env_cfg = cfg.at("env");
  long T = cfg.at("horizon").get<long>();
  int n_runs = cfg.at("runs").get<int>();
  std::uint64_t base_seed = cfg.value("seed", 1);
  long out_stride = cfg.value("stride", 100);

  std::vector<std::pair<std::string, std::vector<pm::RunRecord>>> by_strategy;
  for (const auto& strat : cfg.at("strategies")) {
    std::string name = strat.value("name", strat.at("strategy").get<std::string>());
    std::fprintf(stderr, "running %s: %d runs x %ld rounds...\n", name.c_str(), n_runs, T);
    by_strategy.emplace_back(name, pm::replicate(strat, env_cfg, T, n_runs, base_seed, threads));
  }
  std::string reference = cfg.value("reference", by_strategy.front().first);
  pm::ExperimentSummary summary = pm::summarize(by_strategy, reference);
  json sj = pm::summary_json(summary);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/curves.csv");
    pm::write_curves_csv(csv, by_strategy, out_stride);
    write_text(out_dir + "/summary.json", sj.dump(2) + "\n");
  }
  print_summary_table(sj);
  return 0;
}

int cmd_monitor(const std::string& config_path, long seed, int runs, const std::string& out_dir) {
  json cfg = read_json_file(config_path);
  if (seed >= 0) cfg["seed"] = seed;
  if (runs > 0) cfg["runs"] = runs;

  pm::MonitorConfig mc;
  mc.C = cfg.value("C", 10);
  std::string balance = cfg.value("balance", "balanced");
  mc.balance = balance == "imbalanced" ? pm::ClassBalance::kImbalanced : pm::ClassBalance::kBalanced;
  std::string errors = cfg.value("errors", "uniform");
  mc.errors = errors == "nonuniform" ? pm::ErrorProfile::kNonuniform : pm::ErrorProfile::kUniform;
  mc.diagonal_complement = cfg.value("diagonal_complement", false);
  mc.alpha = cfg.value("alpha", 1.01);
  mc.rand.K = cfg.value("K", mc.rand.K);
  mc.rand.eps = cfg.value("eps", mc.rand.eps);
  mc.rand.sigma = cfg.value("sigma", mc.rand.sigma);
  mc.rand.A = cfg.value("A", mc.rand.A);

  int n_seeds = cfg.value("runs", 24);
  std::uint64_t base_seed = cfg.value("seed", 1);
  std::vector<std::string> families =
      cfg.value("families", std::vector<std::string>{"explore_fully", "c_cbp", "c_randcbp"});
  std::vector<double> taus = cfg.at("tau_list").get<std::vector<double>>();

  std::vector<pm::MonitorReport> rows;
  for (double tau : taus) {
    mc.tau = tau;
    for (const auto& fam : families) {
      std::fprintf(stderr, "monitoring %s at tau=%g: %d seeds...\n", fam.c_str(), tau, n_seeds);
      rows.push_back(
          pm::monitor_aggregate(pm::monitor_family_from_string(fam), mc, n_seeds, base_seed));
    }
  }
  json rj = pm::monitor_report_json(rows);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/monitor.json", rj.dump(2) + "\n");
  }
  print_monitor_table(rj);
  return 0;
}

int cmd_report(const std::string& dir) {
  bool found = false;
  std::string sp = dir + "/summary.json";
  if (std::filesystem::exists(sp)) {
    print_summary_table(read_json_file(sp));
    found = true;
  }
  std::string mp = dir + "/monitor.json";
  if (std::filesystem::exists(mp)) {
    print_monitor_table(read_json_file(mp));
    found = true;
  }
  if (!found) {
    std::fprintf(stderr, "no summary.json or monitor.json under %s\n", dir.c_str());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partial-monitoring toolkit"};
  app.require_subcommand(1);

  std::string game_spec, out, config_path, out_dir, report_dir;
  double tau = 0.1;
  long seed = -1, horizon = 0, stride = 0;
  int runs = 0, threads = 1;

  auto* analyze = app.add_subcommand("analyze", "analyze a game's structure");
  analyze->add_option("game", game_spec, "bundled game name or JSON spec path")->required();
  analyze->add_option("--tau", tau, "threshold for tau_detection");
  analyze->add_option("--out", out, "write the JSON report here instead of stdout");

  auto* simulate = app.add_subcommand("simulate", "run a benchmark from a config file");
  simulate->add_option("config", config_path, "experiment config JSON")->required();
  simulate->add_option("--seed", seed, "base seed (overrides config)");
  simulate->add_option("--runs", runs, "number of runs (overrides config)");
  simulate->add_option("--horizon", horizon, "rounds per run (overrides config)");
  simulate->add_option("--out", out_dir, "directory for curves.csv and summary.json");
  simulate->add_option("--stride", stride, "CSV downsampling stride (overrides config)");
  simulate->add_option("--threads", threads, "worker threads across runs");

  auto* monitor = app.add_subcommand("monitor", "run the classifier monitoring protocol");
  monitor->add_option("config", config_path, "monitor config JSON")->required();
  monitor->add_option("--seed", seed, "base seed (overrides config)");
  monitor->add_option("--runs", runs, "number of seeds (overrides config)");
  monitor->add_option("--out", out_dir, "directory for monitor.json");

  auto* report = app.add_subcommand("report", "print tables from a results directory");
  report->add_option("dir", report_dir, "directory with summary.json / monitor.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(analyze)) return cmd_analyze(game_spec, tau, out);
    if (app.got_subcommand(simulate))
      return cmd_simulate(config_path, seed, runs, horizon, out_dir, stride, threads);
    if (app.got_subcommand(monitor)) return cmd_monitor(config_path, seed, runs, out_dir);
    if (app.got_subcommand(report)) return cmd_report(report_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
