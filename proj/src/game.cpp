#include "pm/game.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <unordered_map>

namespace pm {

Game build_game(const std::string& name, Eigen::MatrixXd loss,
                std::vector<std::vector<std::string>> feedback) {
  const int n = static_cast<int>(loss.rows());
  const int m = static_cast<int>(loss.cols());
  if (n < 1 || m < 1) throw std::invalid_argument("build_game: empty loss matrix");
  if (!loss.allFinite()) throw std::invalid_argument("build_game: non-finite loss entry");
  if (static_cast<int>(feedback.size()) != n)
    throw std::invalid_argument("build_game: feedback rows must match actions");
  for (const auto& row : feedback) {
    if (static_cast<int>(row.size()) != m)
      throw std::invalid_argument("build_game: feedback columns must match outcomes");
    for (const auto& glyph : row)
      if (glyph.empty()) throw std::invalid_argument("build_game: empty feedback glyph");
  }

  Game g;
  g.name = name;
  g.loss = std::move(loss);
  g.feedback = std::move(feedback);
  g.sigma.resize(n);
  g.symbol_index.assign(n, std::vector<int>(m, -1));
  g.alphabet.resize(n);
  g.signal.resize(n);
  for (int i = 0; i < n; ++i) {
    std::unordered_map<std::string, int> seen;
    for (int j = 0; j < m; ++j) {
      const std::string& glyph = g.feedback[i][j];
      auto it = seen.find(glyph);
      if (it == seen.end()) {
        it = seen.emplace(glyph, static_cast<int>(g.alphabet[i].size())).first;
        g.alphabet[i].push_back(glyph);
      }
      g.symbol_index[i][j] = it->second;
    }
    g.sigma[i] = static_cast<int>(g.alphabet[i].size());
    g.signal[i] = Eigen::MatrixXd::Zero(g.sigma[i], m);
    for (int j = 0; j < m; ++j) g.signal[i](g.symbol_index[i][j], j) = 1.0;
  }
  return g;
}

const Eigen::MatrixXd& signal_matrix(const Game& g, int action) {
  return g.signal.at(action);
}

int encode_feedback(const Game& g, int action, int outcome) {
  if (action < 0 || action >= g.n_actions()) throw std::out_of_range("encode_feedback: action");
  if (outcome < 0 || outcome >= g.n_outcomes()) throw std::out_of_range("encode_feedback: outcome");
  return g.symbol_index[action][outcome];
}

Eigen::VectorXd observe(const Game& g, int action, int outcome) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(g.sigma.at(action));
  e(encode_feedback(g, action, outcome)) = 1.0;
  return e;
}

bool loss_normalization_violated(const Game& g) {
  return g.loss.maxCoeff() - g.loss.minCoeff() > 1.0 + 1e-12;
}

Game load_game_spec(const nlohmann::json& spec) {
  if (!spec.contains("loss") || !spec.contains("feedback"))
    throw std::invalid_argument("game spec: requires 'loss' and 'feedback'");
  std::string name = spec.value("name", "unnamed");
  const auto& jl = spec.at("loss");
  if (!jl.is_array() || jl.empty()) throw std::invalid_argument("game spec: loss must be a nonempty array");
  const int n = static_cast<int>(jl.size());
  const int m = static_cast<int>(jl.at(0).size());
  Eigen::MatrixXd loss(n, m);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(jl.at(i).size()) != m)
      throw std::invalid_argument("game spec: ragged loss matrix");
    for (int j = 0; j < m; ++j) loss(i, j) = jl.at(i).at(j).get<double>();
  }
  std::vector<std::vector<std::string>> feedback;
  for (const auto& row : spec.at("feedback")) {
    std::vector<std::string> r;
    for (const auto& cell : row) r.push_back(cell.get<std::string>());
    feedback.push_back(std::move(r));
  }
  return build_game(name, std::move(loss), std::move(feedback));
}

nlohmann::json save_game_spec(const Game& g) {
  nlohmann::json spec;
  spec["name"] = g.name;
  nlohmann::json jl = nlohmann::json::array();
  for (int i = 0; i < g.n_actions(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < g.n_outcomes(); ++j) row.push_back(g.loss(i, j));
    jl.push_back(std::move(row));
  }
  spec["loss"] = std::move(jl);
  spec["feedback"] = g.feedback;
  return spec;
}

Game apple_tasting() {
  Eigen::MatrixXd loss(2, 2);
  loss << 1, 0,
          0, 1;
  // Action 0 (discard) is blind; action 1 (taste) reveals the outcome.
  return build_game("apple_tasting", loss, {{".", "."}, {"x", "o"}});
}

Game label_efficient() {
  Eigen::MatrixXd loss(3, 2);
  loss << 1, 1,
          0, 1,
          1, 0;
  // Action 0 pays a unit cost to see the label; actions 1 and 2 guess blind.
  return build_game("label_efficient", loss, {{"a", "b"}, {".", "."}, {".", "."}});
}

Game tau_detection(double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau_detection: tau must lie in (0,1)");
  Eigen::MatrixXd loss(2, 2);
  loss << 1.0, 1.0,
          1.0 / tau, 0.0;
  // Action 0 (verify) reveals whether the item was an error; action 1 (pass)
  // is blind.
  return build_game("tau_detection", loss, {{"x", "o"}, {".", "."}});
}

Game bundled_game(const std::string& name, double tau) {
  if (name == "apple_tasting") return apple_tasting();
  if (name == "label_efficient") return label_efficient();
  if (name == "tau_detection") return tau_detection(tau);
  throw std::invalid_argument("bundled_game: unknown game '" + name + "'");
}

}  // namespace pm
