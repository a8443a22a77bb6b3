#ifndef CHOICEEVO_GAMES_HPP
#define CHOICEEVO_GAMES_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "choiceevo/random.hpp"

namespace choiceevo {

using Payoffs2x2 = std::array<std::array<double, 2>, 2>;

/// Symmetric 2x2 fitness game. payoff[i][j] is the row player's fitness when
/// row plays i and column plays j; the column player's fitness for the same
/// profile is payoff[j][i].
struct Game {
  Payoffs2x2 payoff{};

  Game() = default;
  explicit Game(const Payoffs2x2& p);

  double at(int own, int other) const { return payoff[own][other]; }

  friend bool operator==(const Game&, const Game&) = default;
};

/// Class of games with i.i.d. uniform integer payoffs in {0, ..., max_payoff}.
struct GameClassConfig {
  int max_payoff = 10;
  std::int64_t sample_count = 50000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Draws payoff[0][0], payoff[0][1], payoff[1][0], payoff[1][1] in that order,
/// one uniform_below(N + 1) call each.
Game sample_game(RandomStream& rng, int max_payoff);

/// Number of games in the class, (N+1)^4. Throws std::overflow_error when the
/// count does not fit in std::int64_t.
std::int64_t game_count(int max_payoff);

/// The game at lexicographic position `index` of the enumeration.
Game game_at(std::int64_t index, int max_payoff);

/// All (N+1)^4 games in lexicographic order of
/// (payoff[0][0], payoff[0][1], payoff[1][0], payoff[1][1]).
std::vector<Game> enumerate_games(int max_payoff);

void to_json(nlohmann::json& j, const Game& g);
void from_json(const nlohmann::json& j, Game& g);

}  // namespace choiceevo

#endif  // CHOICEEVO_GAMES_HPP
