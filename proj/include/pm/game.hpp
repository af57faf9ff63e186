// Finite partial-monitoring game: a loss matrix over actions x outcomes plus
// a feedback table of symbols. The learner never sees the outcome or the
// loss, only the symbol printed in the cell (played action, drawn outcome).
#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace pm {

struct Game {
  std::string name;
  Eigen::MatrixXd loss;  // N x M
  // Raw feedback glyphs, N rows of M strings. Glyphs only have meaning within
  // a row: two actions printing the same glyph still have separate alphabets.
  std::vector<std::vector<std::string>> feedback;

  // Derived on construction:
  std::vector<int> sigma;                      // per-action alphabet size
  std::vector<std::vector<int>> symbol_index;  // N x M, cell -> 0-based symbol id
  std::vector<std::vector<std::string>> alphabet;  // per action, id -> glyph
  std::vector<Eigen::MatrixXd> signal;             // per action, sigma_i x M 0/1

  int n_actions() const { return static_cast<int>(loss.rows()); }
  int n_outcomes() const { return static_cast<int>(loss.cols()); }
};

// Validates shapes and derives alphabets and signal matrices. Within each row
// symbols are numbered by first appearance, left to right, so the signal
// matrix layout is a deterministic function of the feedback table.
Game build_game(const std::string& name, Eigen::MatrixXd loss,
                std::vector<std::vector<std::string>> feedback);

// Signal matrix of one action: entry (s, j) is 1 iff outcome j prints symbol s.
const Eigen::MatrixXd& signal_matrix(const Game& g, int action);

// Symbol id the learner observes for (action, outcome).
int encode_feedback(const Game& g, int action, int outcome);

// One-hot observation vector of length sigma_action for the symbol above.
Eigen::VectorXd observe(const Game& g, int action, int outcome);

// True when the loss range exceeds the unit interval; regret-width tuning in
// the strategies assumes losses spread at most 1, so callers surface this.
bool loss_normalization_violated(const Game& g);

// JSON round-trip: {"name", "loss" (rows), "feedback" (rows of glyphs)}.
Game load_game_spec(const nlohmann::json& spec);
nlohmann::json save_game_spec(const Game& g);

// Bundled instances.
Game apple_tasting();
Game label_efficient();
Game tau_detection(double tau);  // requires 0 < tau < 1

// Lookup by name: "apple_tasting", "label_efficient", "tau_detection"
// (the latter reads `tau`). Throws std::invalid_argument on unknown names.
Game bundled_game(const std::string& name, double tau = 0.1);

}  // namespace pm
