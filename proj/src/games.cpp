#include "choiceevo/games.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace choiceevo {

Game::Game(const Payoffs2x2& p) : payoff(p) {
  for (const auto& row : payoff)
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument("Game: payoffs must be finite");
}

void GameClassConfig::validate() const {
  if (max_payoff < 0) throw std::invalid_argument("GameClassConfig: max payoff must be >= 0");
  if (sample_count < 1) throw std::invalid_argument("GameClassConfig: sample count must be >= 1");
}

Game sample_game(RandomStream& rng, int max_payoff) {
  if (max_payoff < 0) throw std::invalid_argument("sample_game: max payoff must be >= 0");
  const auto range = static_cast<std::uint64_t>(max_payoff) + 1;
  Game g;
  for (auto& row : g.payoff)
    for (double& v : row) v = static_cast<double>(rng.uniform_below(range));
  return g;
}

std::int64_t game_count(int max_payoff) {
  if (max_payoff < 0) throw std::invalid_argument("game_count: max payoff must be >= 0");
  const std::int64_t side = static_cast<std::int64_t>(max_payoff) + 1;
  std::int64_t count = 1;
  for (int k = 0; k < 4; ++k) {
    if (count > std::numeric_limits<std::int64_t>::max() / side)
      throw std::overflow_error("game count (N+1)^4 overflows for N=" + std::to_string(max_payoff));
    count *= side;
  }
  return count;
}

Game game_at(std::int64_t index, int max_payoff) {
  const std::int64_t side = static_cast<std::int64_t>(max_payoff) + 1;
  Game g;
  // Last entry varies fastest.
  for (int k = 3; k >= 0; --k) {
    g.payoff[k / 2][k % 2] = static_cast<double>(index % side);
    index /= side;
  }
  return g;
}

std::vector<Game> enumerate_games(int max_payoff) {
  const std::int64_t count = game_count(max_payoff);
  std::vector<Game> games;
  games.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) games.push_back(game_at(i, max_payoff));
  return games;
}

void to_json(nlohmann::json& j, const Game& g) {
  j = nlohmann::json{{"payoffs", {{g.payoff[0][0], g.payoff[0][1]}, {g.payoff[1][0], g.payoff[1][1]}}}};
}

void from_json(const nlohmann::json& j, Game& g) {
  const auto& p = j.at("payoffs");
  if (p.size() != 2 || p[0].size() != 2 || p[1].size() != 2)
    throw std::invalid_argument("Game JSON: payoffs must be 2x2");
  Payoffs2x2 values{};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) values[i][k] = p[i][k].get<double>();
  g = Game(values);
}

}  // namespace choiceevo
