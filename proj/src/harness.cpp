#include "pm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "pm/cbp.hpp"
#include "pm/cbpside.hpp"
#include "pm/structure.hpp"

namespace pm {

namespace {

// RNG stream ids; env and strategy consume independent streams so that
// deterministic and randomized strategies face identical outcome sequences
// under the same seed.
constexpr std::uint64_t kEnvStream = 1;
constexpr std::uint64_t kStrategyStream = 2;
constexpr std::uint64_t kClassifierStream = 11;
constexpr std::uint64_t kClassStreamBase = 100;
constexpr std::uint64_t kClassStrategyBase = 100000;

RandomizationConfig rand_config_from(const nlohmann::json& cfg) {
  RandomizationConfig rc;
  rc.K = cfg.value("K", rc.K);
  rc.eps = cfg.value("eps", rc.eps);
  rc.sigma = cfg.value("sigma", rc.sigma);
  rc.A = cfg.value("A", rc.A);
  return rc;
}

Game game_from_config(const nlohmann::json& env_cfg) {
  const auto& g = env_cfg.at("game");
  if (g.is_string()) return bundled_game(g.get<std::string>(), env_cfg.value("tau", 0.1));
  return load_game_spec(g);
}

// Strategy drivers: a thin seam so the run loop does not care which family
// it is exercising.
struct Driver {
  virtual ~Driver() = default;
  virtual bool contextual() const { return false; }
  virtual int step(Rng&) { throw std::logic_error("driver: non-contextual step unsupported"); }
  virtual int step(const Eigen::VectorXd&, Rng&) {
    throw std::logic_error("driver: contextual step unsupported");
  }
  virtual void update(int, int) {}
  virtual void update(const Eigen::VectorXd&, int, int) {}
  virtual long confidence_failures() const { return 0; }
};

struct CbpDriver : Driver {
  GameStructure s;
  CbpState st;
  CbpDriver(const Game& game, const CbpConfig& cfg) : s(analyze_game(game)) {
    st = make_cbp(s, cfg);
  }
  int step(Rng& rng) override { return cbp_step(st, rng); }
  void update(int a, int sym) override { cbp_update(st, a, sym); }
  long confidence_failures() const override { return st.confidence_failures; }
};

struct CbpSideDriver : Driver {
  GameStructure s;
  CbpSideState st;
  CbpSideDriver(const Game& game, int d, const CbpSideConfig& cfg) : s(analyze_game(game)) {
    st = make_cbpside(s, d, cfg);
  }
  bool contextual() const override { return true; }
  int step(const Eigen::VectorXd& x, Rng& rng) override { return cbpside_step(st, x, rng); }
  void update(const Eigen::VectorXd& x, int a, int sym) override {
    cbpside_update(st, x, a, sym);
  }
  long confidence_failures() const override { return st.confidence_failures; }
};

struct UniformDriver : Driver {
  int n;
  bool ctx;
  UniformDriver(int n_actions, bool contextual) : n(n_actions), ctx(contextual) {}
  bool contextual() const override { return ctx; }
  int step(Rng& rng) override { return rng.uniform_int(n); }
  int step(const Eigen::VectorXd&, Rng& rng) override { return rng.uniform_int(n); }
};

struct FixedDriver : Driver {
  int a;
  bool ctx;
  FixedDriver(int action, bool contextual) : a(action), ctx(contextual) {}
  bool contextual() const override { return ctx; }
  int step(Rng&) override { return a; }
  int step(const Eigen::VectorXd&, Rng&) override { return a; }
};

std::unique_ptr<Driver> make_driver(const nlohmann::json& strategy_cfg, const Game& game,
                                    bool contextual_env, int context_dim) {
  std::string kind = strategy_cfg.at("strategy").get<std::string>();
  if (kind == "cbp" || kind == "randcbp") {
    if (contextual_env)
      throw std::invalid_argument("run_game: '" + kind + "' cannot read contexts");
    CbpConfig cfg;
    cfg.alpha = strategy_cfg.value("alpha", cfg.alpha);
    cfg.randomized = kind == "randcbp";
    cfg.rand = rand_config_from(strategy_cfg);
    return std::make_unique<CbpDriver>(game, cfg);
  }
  if (kind == "cbpside" || kind == "randcbpside") {
    if (!contextual_env)
      throw std::invalid_argument("run_game: '" + kind + "' requires a contextual environment");
    CbpSideConfig cfg;
    cfg.alpha = strategy_cfg.value("alpha", cfg.alpha);
    cfg.lambda = strategy_cfg.value("lambda", cfg.lambda);
    cfg.randomized = kind == "randcbpside";
    cfg.rand = rand_config_from(strategy_cfg);
    return std::make_unique<CbpSideDriver>(game, context_dim, cfg);
  }
  if (kind == "uniform_random") return std::make_unique<UniformDriver>(game.n_actions(), contextual_env);
  if (kind == "fixed") {
    int a = strategy_cfg.at("action").get<int>() - 1;  // configs are 1-based
    if (a < 0 || a >= game.n_actions()) throw std::invalid_argument("run_game: fixed action out of range");
    return std::make_unique<FixedDriver>(a, contextual_env);
  }
  throw std::invalid_argument("run_game: unknown strategy '" + kind + "'");
}

Eigen::MatrixXd theta_from_config(const nlohmann::json& env_cfg, int n_outcomes, int d) {
  const auto& th = env_cfg.at("theta");
  if (th.is_string()) {
    std::string s = th.get<std::string>();
    if (s.rfind("const:", 0) == 0) {
      double v = std::stod(s.substr(6));
      return Eigen::MatrixXd::Constant(n_outcomes, d, v);
    }
    if (s == "profile") {
      // Column j is a two-outcome distribution with first-outcome mass
      // (j + 1/2) / d, so one-hot contexts select d distinct instances
      // spanning the simplex.
      if (n_outcomes != 2)
        throw std::invalid_argument("theta 'profile' is defined for two-outcome games");
      Eigen::MatrixXd theta(2, d);
      for (int j = 0; j < d; ++j) {
        double p = (j + 0.5) / d;
        theta(0, j) = p;
        theta(1, j) = 1.0 - p;
      }
      return theta;
    }
    throw std::invalid_argument("run_game: unknown theta spec '" + s + "'");
  }
  Eigen::MatrixXd theta(n_outcomes, d);
  if (static_cast<int>(th.size()) != n_outcomes)
    throw std::invalid_argument("run_game: theta rows must match outcomes");
  for (int i = 0; i < n_outcomes; ++i) {
    if (static_cast<int>(th.at(i).size()) != d)
      throw std::invalid_argument("run_game: theta columns must match d");
    for (int j = 0; j < d; ++j) theta(i, j) = th.at(i).at(j).get<double>();
  }
  return theta;
}

}  // namespace

RunRecord run_game(const nlohmann::json& strategy_cfg, const nlohmann::json& env_cfg,
                   long horizon, std::uint64_t seed, const RunOptions& opts) {
  if (horizon < 1) throw std::invalid_argument("run_game: horizon must be positive");
  auto t0 = std::chrono::steady_clock::now();

  RunRecord rec;
  rec.seed = seed;
  rec.horizon = horizon;
  rec.config = {{"strategy", strategy_cfg}, {"env", env_cfg}, {"horizon", horizon}};

  Rng env_rng(mix_seed(seed, kEnvStream));
  Rng strat_rng(mix_seed(seed, kStrategyStream));

  Game game = game_from_config(env_cfg);
  std::string env_kind = env_cfg.at("env").get<std::string>();
  rec.cum_regret.reserve(horizon);

  if (env_kind == "bernoulli") {
    Eigen::VectorXd p;
    if (env_cfg.contains("p")) {
      auto pv = env_cfg.at("p").get<std::vector<double>>();
      p = Eigen::Map<Eigen::VectorXd>(pv.data(), static_cast<long>(pv.size()));
    } else {
      std::string instance = env_cfg.at("instance").get<std::string>();
      if (game.n_outcomes() != 2)
        throw std::invalid_argument("run_game: instance sampling needs a two-outcome game");
      bool imbalanced = instance == "imbalanced";
      if (!imbalanced && instance != "balanced")
        throw std::invalid_argument("run_game: unknown instance '" + instance + "'");
      double pa = sample_two_outcome_p(env_rng, imbalanced);
      p = Eigen::Vector2d(pa, 1.0 - pa);
    }
    BernoulliPmEnv env = make_bernoulli_env(game, p);
    auto driver = make_driver(strategy_cfg, env.game, /*contextual_env=*/false, 0);
    double cum = 0.0;
    for (long t = 0; t < horizon; ++t) {
      int a = driver->step(strat_rng);
      StepOutcome so = env_step(env, a, env_rng);
      driver->update(a, so.symbol);
      cum += so.regret_inc;
      rec.cum_regret.push_back(cum);
      if (opts.store_actions) rec.actions.push_back(a);
    }
    rec.confidence_failures = driver->confidence_failures();
  } else if (env_kind == "linear") {
    int d = env_cfg.at("d").get<int>();
    Eigen::MatrixXd theta = theta_from_config(env_cfg, game.n_outcomes(), d);
    std::string ctx = env_cfg.value("contexts", "iid_uniform");
    ContextDist dist;
    if (ctx == "iid_uniform") dist = ContextDist::kIidUniform;
    else if (ctx == "one_hot") dist = ContextDist::kOneHot;
    else throw std::invalid_argument("run_game: unknown context distribution '" + ctx + "'");
    LinearPmEnv env = make_linear_env(game, theta, dist);
    auto driver = make_driver(strategy_cfg, env.game, /*contextual_env=*/true, d);
    double cum = 0.0;
    for (long t = 0; t < horizon; ++t) {
      Eigen::VectorXd x = draw_context(env, env_rng);
      int a = driver->step(x, strat_rng);
      StepOutcome so = env_step(env, x, a, env_rng);
      driver->update(x, a, so.symbol);
      cum += so.regret_inc;
      rec.cum_regret.push_back(cum);
      if (opts.store_actions) rec.actions.push_back(a);
    }
    rec.confidence_failures = driver->confidence_failures();
  } else {
    throw std::invalid_argument("run_game: unknown environment '" + env_kind + "'");
  }

  rec.final_regret = rec.cum_regret.back();
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<RunRecord> replicate(const nlohmann::json& strategy_cfg, const nlohmann::json& env_cfg,
                                 long horizon, int n_runs, std::uint64_t base_seed, int n_threads,
                                 const RunOptions& opts) {
  if (n_runs < 1) throw std::invalid_argument("replicate: n_runs must be positive");
  std::vector<RunRecord> out(n_runs);
  if (n_threads <= 1) {
    for (int r = 0; r < n_runs; ++r)
      out[r] = run_game(strategy_cfg, env_cfg, horizon, base_seed + r, opts);
    return out;
  }
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= n_runs) return;
      out[r] = run_game(strategy_cfg, env_cfg, horizon, base_seed + r, opts);
    }
  };
  std::vector<std::thread> pool;
  int k = std::min(n_threads, n_runs);
  pool.reserve(k);
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return out;
}

ExperimentSummary summarize(
    const std::vector<std::pair<std::string, std::vector<RunRecord>>>& by_strategy,
    const std::string& reference) {
  if (by_strategy.empty()) throw std::invalid_argument("summarize: no strategies");
  const std::size_t n_runs = by_strategy.front().second.size();
  const long horizon = n_runs ? by_strategy.front().second.front().horizon : 0;
  for (const auto& [name, runs] : by_strategy)
    if (runs.size() != n_runs) throw std::invalid_argument("summarize: unequal run counts");

  const std::vector<double>* ref_finals = nullptr;
  ExperimentSummary summary;
  summary.reference = reference;
  for (const auto& [name, runs] : by_strategy) {
    StrategySummary row;
    row.name = name;
    row.runs = static_cast<int>(runs.size());
    row.finals.reserve(runs.size());
    row.mean_curve.assign(horizon, 0.0);
    for (const auto& rec : runs) {
      row.finals.push_back(rec.final_regret);
      for (long t = 0; t < horizon; ++t) row.mean_curve[t] += rec.cum_regret[t];
    }
    for (long t = 0; t < horizon; ++t) row.mean_curve[t] /= static_cast<double>(n_runs);
    row.mean_final = mean(row.finals);
    row.std_final = sample_stddev(row.finals);
    row.median_final = median(row.finals);
    row.ci99_half = ci99_half_width(row.finals);
    summary.strategies.push_back(std::move(row));
  }
  for (const auto& row : summary.strategies)
    if (row.name == reference) ref_finals = &row.finals;
  if (!ref_finals) throw std::invalid_argument("summarize: reference strategy not present");

  for (auto& row : summary.strategies) {
    if (row.name != reference && row.runs >= 2)
      row.welch_p_vs_ref = welch_one_sided(row.finals, *ref_finals).p;
  }
  // Win counts: lowest final regret per run, ties credited to every winner.
  for (std::size_t r = 0; r < n_runs; ++r) {
    double best = summary.strategies.front().finals[r];
    for (const auto& row : summary.strategies) best = std::min(best, row.finals[r]);
    for (auto& row : summary.strategies)
      if (row.finals[r] == best) row.wins += 1;
  }
  return summary;
}

void write_curves_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, std::vector<RunRecord>>>& by_strategy,
                      long stride) {
  if (stride < 1) stride = 1;
  os << "strategy,run,round,cum_regret\n";
  for (const auto& [name, runs] : by_strategy) {
    for (std::size_t r = 0; r < runs.size(); ++r) {
      const auto& curve = runs[r].cum_regret;
      for (std::size_t t = 0; t < curve.size(); ++t) {
        long round = static_cast<long>(t) + 1;
        if (round % stride != 0 && round != runs[r].horizon) continue;
        os << name << ',' << (r + 1) << ',' << round << ',' << curve[t] << '\n';
      }
    }
  }
}

nlohmann::json summary_json(const ExperimentSummary& summary) {
  nlohmann::json j;
  j["reference"] = summary.reference;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : summary.strategies) {
    nlohmann::json r;
    r["strategy"] = row.name;
    r["runs"] = row.runs;
    r["mean_final_regret"] = row.mean_final;
    r["std_final_regret"] = row.std_final;
    r["median_final_regret"] = row.median_final;
    r["ci99_half_width"] = row.ci99_half;
    r["wins"] = row.wins;
    if (row.welch_p_vs_ref >= 0.0)
      r["welch_p_vs_reference"] = row.welch_p_vs_ref;
    else
      r["welch_p_vs_reference"] = nullptr;
    rows.push_back(std::move(r));
  }
  j["strategies"] = std::move(rows);
  return j;
}

MonitorFamily monitor_family_from_string(const std::string& name) {
  if (name == "explore_fully") return MonitorFamily::kExploreFully;
  if (name == "c_cbp") return MonitorFamily::kCbp;
  if (name == "c_randcbp") return MonitorFamily::kRandCbp;
  throw std::invalid_argument("unknown monitor family '" + name + "'");
}

const char* to_string(MonitorFamily f) {
  switch (f) {
    case MonitorFamily::kExploreFully: return "explore_fully";
    case MonitorFamily::kCbp: return "c_cbp";
    case MonitorFamily::kRandCbp: return "c_randcbp";
  }
  return "?";
}

MonitorRow monitor_run(MonitorFamily family, const MonitorConfig& cfg, std::uint64_t seed) {
  Rng gen_rng(mix_seed(seed, kClassifierStream));
  ClassifierStream stream = generate_classifier(cfg.C, cfg.balance, cfg.errors, gen_rng,
                                                cfg.diagonal_complement);
  WaldBudget budget = wald_budget(cfg.tau, cfg.C);

  MonitorRow row;
  row.tau = cfg.tau;
  row.budget_per_class = budget.per_class;
  row.budget_total = budget.total;

  Game game = tau_detection(cfg.tau);
  GameStructure structure = analyze_game(game);

  for (int c = 0; c < cfg.C; ++c) {
    Rng outcome_rng(mix_seed(seed, kClassStreamBase + c));
    Rng strat_rng(mix_seed(seed, kClassStrategyBase + c));
    CbpState st;
    bool adaptive = family != MonitorFamily::kExploreFully;
    if (adaptive) {
      CbpConfig scfg;
      scfg.alpha = cfg.alpha;
      scfg.randomized = family == MonitorFamily::kRandCbp;
      scfg.rand = cfg.rand;
      st = make_cbp(structure, scfg);
    }
    long verified = 0, errors_seen = 0;
    for (long t = 0; t < budget.per_class; ++t) {
      int a = adaptive ? cbp_step(st, strat_rng) : 0;
      int outcome = outcome_rng.bernoulli(stream.p_err(c)) ? 0 : 1;  // 0 = error
      if (adaptive) cbp_update(st, a, game.symbol_index[a][outcome]);
      if (a == 0) {
        verified += 1;
        errors_seen += outcome == 0 ? 1 : 0;
      }
    }
    row.verifications += verified;
    bool flag = verified > 0 &&
                static_cast<double>(errors_seen) / static_cast<double>(verified) >= cfg.tau;
    if (flag) row.flagged.push_back(c + 1);
    if (stream.p_err(c) >= cfg.tau) row.truth.push_back(c + 1);
  }

  long tp = 0;
  for (int c : row.flagged)
    if (std::find(row.truth.begin(), row.truth.end(), c) != row.truth.end()) ++tp;
  long fp = static_cast<long>(row.flagged.size()) - tp;
  long fn = static_cast<long>(row.truth.size()) - tp;
  row.f1 = (2 * tp + fp + fn) == 0
               ? 1.0
               : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
  return row;
}

MonitorReport monitor_aggregate(MonitorFamily family, const MonitorConfig& cfg, int n_seeds,
                                std::uint64_t base_seed) {
  if (n_seeds < 1) throw std::invalid_argument("monitor_aggregate: need at least one seed");
  std::vector<double> f1s, verifs;
  MonitorReport rep;
  rep.family = to_string(family);
  rep.tau = cfg.tau;
  rep.seeds = n_seeds;
  for (int i = 0; i < n_seeds; ++i) {
    MonitorRow row = monitor_run(family, cfg, base_seed + i);
    rep.budget_total = row.budget_total;
    f1s.push_back(row.f1);
    verifs.push_back(static_cast<double>(row.verifications));
  }
  rep.f1_mean = mean(f1s);
  rep.f1_median = median(f1s);
  rep.f1_std = sample_stddev(f1s);
  rep.verif_mean = mean(verifs);
  rep.verif_median = median(verifs);
  rep.verif_std = sample_stddev(verifs);
  return rep;
}

nlohmann::json monitor_report_json(const std::vector<MonitorReport>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["family"] = r.family;
    j["tau"] = r.tau;
    j["budget_total"] = r.budget_total;
    j["seeds"] = r.seeds;
    j["f1_mean"] = r.f1_mean;
    j["f1_median"] = r.f1_median;
    j["f1_std"] = r.f1_std;
    j["verifications_mean"] = r.verif_mean;
    j["verifications_median"] = r.verif_median;
    j["verifications_std"] = r.verif_std;
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace pm
