#include <doctest/doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pm/harness.hpp"

using nlohmann::json;
using pm::MonitorConfig;
using pm::MonitorFamily;
using pm::RunRecord;

namespace {

json at_env(double pa) { return {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"p", {pa, 1.0 - pa}}}; }

}  // namespace

TEST_CASE("fixed strategies accumulate exactly the per-round gap") {
  json env = at_env(0.9);
  RunRecord opt = pm::run_game({{"strategy", "fixed"}, {"action", 2}}, env, 100, 7);
  CHECK(opt.final_regret == 0.0);
  for (double c : opt.cum_regret) CHECK(c == 0.0);

  RunRecord bad = pm::run_game({{"strategy", "fixed"}, {"action", 1}}, env, 100, 7);
  CHECK(bad.final_regret == doctest::Approx(100 * 0.8).epsilon(1e-9));
  CHECK(bad.cum_regret[49] == doctest::Approx(50 * 0.8).epsilon(1e-9));
}

TEST_CASE("runs replay bit-for-bit from the seed") {
  json strat = {{"strategy", "randcbp"}};
  json env = {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"instance", "imbalanced"}};
  pm::RunOptions opts;
  opts.store_actions = true;
  RunRecord a = pm::run_game(strat, env, 500, 42, opts);
  RunRecord b = pm::run_game(strat, env, 500, 42, opts);
  CHECK(a.cum_regret == b.cum_regret);
  CHECK(a.actions == b.actions);
  CHECK(a.confidence_failures == b.confidence_failures);

  RunRecord c = pm::run_game(strat, env, 500, 43, opts);
  CHECK(a.cum_regret != c.cum_regret);
}

TEST_CASE("per-run instances are drawn from the seed") {
  json strat = {{"strategy", "fixed"}, {"action", 1}};
  json env = {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"instance", "imbalanced"}};
  RunRecord a = pm::run_game(strat, env, 10, 1);
  RunRecord b = pm::run_game(strat, env, 10, 2);
  CHECK(a.final_regret != b.final_regret);
}

TEST_CASE("regret curves never decrease") {
  json env = {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"instance", "imbalanced"}};
  RunRecord rec = pm::run_game({{"strategy", "randcbp"}}, env, 1000, 11);
  double prev = 0.0;
  for (double c : rec.cum_regret) {
    CHECK(c >= prev - 1e-15);
    prev = c;
  }
}

TEST_CASE("game specs embedded in the environment config are honored") {
  json spec = pm::save_game_spec(pm::apple_tasting());
  json env = {{"env", "bernoulli"}, {"game", spec}, {"p", {0.9, 0.1}}};
  RunRecord rec = pm::run_game({{"strategy", "cbp"}}, env, 200, 3);
  CHECK(rec.cum_regret.size() == 200);
  // The tau parameter reaches bundled threshold games.
  json tdenv = {{"env", "bernoulli"}, {"game", "tau_detection"}, {"tau", 0.2}, {"p", {0.5, 0.5}}};
  RunRecord td = pm::run_game({{"strategy", "cbp"}}, tdenv, 50, 3);
  CHECK(td.cum_regret.size() == 50);
}

TEST_CASE("linear environments drive the contextual strategies") {
  json env = {{"env", "linear"},   {"game", "apple_tasting"}, {"d", 3},
              {"theta", "profile"}, {"contexts", "one_hot"}};
  RunRecord rec = pm::run_game({{"strategy", "randcbpside"}}, env, 300, 5);
  CHECK(rec.cum_regret.size() == 300);
  CHECK(rec.final_regret >= 0.0);
  RunRecord uni = pm::run_game({{"strategy", "uniform_random"}}, env, 300, 5);
  CHECK(uni.final_regret > 0.0);

  json cenv = {{"env", "linear"}, {"game", "apple_tasting"}, {"d", 4}, {"theta", "const:0.1"}};
  RunRecord c = pm::run_game({{"strategy", "cbpside"}}, cenv, 100, 5);
  CHECK(c.cum_regret.size() == 100);
}

TEST_CASE("mismatched strategy and environment kinds are rejected") {
  json benv = at_env(0.5);
  json lenv = {{"env", "linear"}, {"game", "apple_tasting"}, {"d", 3}, {"theta", "const:0.1"}};
  CHECK_THROWS_AS(pm::run_game({{"strategy", "cbpside"}}, benv, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(pm::run_game({{"strategy", "cbp"}}, lenv, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(pm::run_game({{"strategy", "nope"}}, benv, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(pm::run_game({{"strategy", "fixed"}, {"action", 3}}, benv, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(pm::run_game({{"strategy", "fixed"}, {"action", 0}}, benv, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(pm::run_game({{"strategy", "cbp"}}, benv, 0, 1), std::invalid_argument);
  json badenv = {{"env", "weird"}, {"game", "apple_tasting"}};
  CHECK_THROWS_AS(pm::run_game({{"strategy", "cbp"}}, badenv, 10, 1), std::invalid_argument);
}

TEST_CASE("replication is seed-ordered and thread-stable") {
  json strat = {{"strategy", "randcbp"}};
  json env = {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"instance", "balanced"}};
  std::vector<RunRecord> serial = pm::replicate(strat, env, 200, 6, 100, 1);
  REQUIRE(serial.size() == 6);
  for (int r = 0; r < 6; ++r) CHECK(serial[r].seed == 100 + r);
  std::vector<RunRecord> pooled = pm::replicate(strat, env, 200, 6, 100, 3);
  for (int r = 0; r < 6; ++r) {
    CHECK(pooled[r].seed == serial[r].seed);
    CHECK(pooled[r].cum_regret == serial[r].cum_regret);
  }
}

TEST_CASE("summaries count wins and compare against the reference") {
  json env = {{"env", "bernoulli"}, {"game", "apple_tasting"}, {"instance", "imbalanced"}};
  std::vector<RunRecord> base = pm::replicate({{"strategy", "fixed"}, {"action", 2}}, env, 50, 4, 1);
  std::vector<RunRecord> same = base;
  pm::ExperimentSummary tie = pm::summarize({{"a", base}, {"b", same}}, "a");
  REQUIRE(tie.strategies.size() == 2);
  CHECK(tie.strategies[0].wins == 4);
  CHECK(tie.strategies[1].wins == 4);
  CHECK(tie.strategies[0].welch_p_vs_ref < 0.0);
  CHECK(tie.strategies[1].welch_p_vs_ref == doctest::Approx(0.5));

  // Pin the instance so the optimal action is the same in every run; the
  // sampled instances would let each fixed action win on some seeds.
  json pinned = at_env(0.9);
  std::vector<RunRecord> better = pm::replicate({{"strategy", "fixed"}, {"action", 2}}, pinned, 50, 4, 1);
  std::vector<RunRecord> worse = pm::replicate({{"strategy", "fixed"}, {"action", 1}}, pinned, 50, 4, 1);
  pm::ExperimentSummary split = pm::summarize({{"good", better}, {"bad", worse}}, "bad");
  const auto& good = split.strategies[0];
  CHECK(good.name == "good");
  CHECK(good.wins == 4);
  CHECK(split.strategies[1].wins == 0);
  CHECK(good.welch_p_vs_ref < 0.05);
  CHECK(good.mean_final < split.strategies[1].mean_final);
  REQUIRE(good.mean_curve.size() == 50);
  CHECK(good.mean_curve.back() == doctest::Approx(good.mean_final).epsilon(1e-12));

  CHECK_THROWS_AS(pm::summarize({{"a", base}}, "zzz"), std::invalid_argument);
  std::vector<RunRecord> fewer(base.begin(), base.begin() + 2);
  CHECK_THROWS_AS(pm::summarize({{"a", base}, {"b", fewer}}, "a"), std::invalid_argument);
}

TEST_CASE("curve export downsamples on the stride plus the final round") {
  json env = at_env(0.9);
  std::vector<RunRecord> runs = pm::replicate({{"strategy", "fixed"}, {"action", 1}}, env, 120, 2, 9);
  std::ostringstream os;
  pm::write_curves_csv(os, {{"fixed1", runs}}, 50);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "strategy,run,round,cum_regret");
  std::vector<std::string> rows;
  while (std::getline(is, line)) rows.push_back(line);
  REQUIRE(rows.size() == 6);  // 2 runs x rounds {50, 100, 120}
  CHECK(rows[0].rfind("fixed1,1,50,", 0) == 0);
  CHECK(rows[1].rfind("fixed1,1,100,", 0) == 0);
  CHECK(rows[2].rfind("fixed1,1,120,", 0) == 0);
  CHECK(rows[3].rfind("fixed1,2,50,", 0) == 0);

  std::ostringstream again;
  pm::write_curves_csv(again, {{"fixed1", runs}}, 50);
  CHECK(again.str() == os.str());
}

TEST_CASE("summary JSON carries one row per strategy") {
  json env = at_env(0.9);
  std::vector<RunRecord> runs = pm::replicate({{"strategy", "fixed"}, {"action", 2}}, env, 20, 3, 2);
  pm::ExperimentSummary s = pm::summarize({{"only", runs}}, "only");
  json j = pm::summary_json(s);
  CHECK(j["reference"] == "only");
  REQUIRE(j["strategies"].size() == 1);
  const auto& row = j["strategies"][0];
  CHECK(row["strategy"] == "only");
  CHECK(row["runs"] == 3);
  CHECK(row["wins"] == 3);
  CHECK(row["welch_p_vs_reference"].is_null());
  CHECK(row.contains("mean_final_regret"));
  CHECK(row.contains("ci99_half_width"));
}

TEST_CASE("monitor family names round-trip") {
  CHECK(pm::monitor_family_from_string("explore_fully") == MonitorFamily::kExploreFully);
  CHECK(pm::monitor_family_from_string("c_cbp") == MonitorFamily::kCbp);
  CHECK(pm::monitor_family_from_string("c_randcbp") == MonitorFamily::kRandCbp);
  CHECK_THROWS_AS(pm::monitor_family_from_string("x"), std::invalid_argument);
  CHECK(std::string(pm::to_string(MonitorFamily::kRandCbp)) == "c_randcbp");
}

TEST_CASE("exhaustive monitoring spends the whole budget") {
  MonitorConfig cfg;
  cfg.tau = 0.2;
  pm::MonitorRow row = pm::monitor_run(MonitorFamily::kExploreFully, cfg, 5);
  CHECK(row.budget_total == 1670);
  CHECK(row.budget_per_class == 167);
  CHECK(row.verifications == row.budget_total);
  CHECK(row.f1 >= 0.0);
  CHECK(row.f1 <= 1.0);
  for (int c : row.flagged) {
    CHECK(c >= 1);
    CHECK(c <= cfg.C);
  }
}

TEST_CASE("adaptive monitoring verifies at most the budget and replays deterministically") {
  MonitorConfig cfg;
  cfg.tau = 0.2;
  pm::MonitorRow a = pm::monitor_run(MonitorFamily::kCbp, cfg, 6);
  CHECK(a.verifications <= a.budget_total);
  CHECK(a.verifications >= cfg.C);  // one initialization verify per class
  pm::MonitorRow b = pm::monitor_run(MonitorFamily::kCbp, cfg, 6);
  CHECK(a.verifications == b.verifications);
  CHECK(a.f1 == b.f1);
  CHECK(a.flagged == b.flagged);
  CHECK(a.truth == b.truth);

  pm::MonitorRow r = pm::monitor_run(MonitorFamily::kRandCbp, cfg, 6);
  CHECK(r.verifications <= r.budget_total);
}

TEST_CASE("monitor aggregation summarizes seeds") {
  MonitorConfig cfg;
  cfg.tau = 0.2;
  pm::MonitorReport rep = pm::monitor_aggregate(MonitorFamily::kExploreFully, cfg, 3, 11);
  CHECK(rep.seeds == 3);
  CHECK(rep.budget_total == 1670);
  CHECK(rep.f1_mean >= 0.0);
  CHECK(rep.f1_mean <= 1.0);
  CHECK(rep.verif_mean == doctest::Approx(1670.0));
  json j = pm::monitor_report_json({rep});
  REQUIRE(j.size() == 1);
  CHECK(j[0]["family"] == "explore_fully");
  CHECK(j[0]["budget_total"] == 1670);
  CHECK(j[0].contains("f1_mean"));
  CHECK(j[0].contains("verifications_mean"));
}
