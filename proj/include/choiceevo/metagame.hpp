#ifndef CHOICEEVO_METAGAME_HPP
#define CHOICEEVO_METAGAME_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "choiceevo/choice.hpp"
#include "choiceevo/games.hpp"

namespace choiceevo {

/// Average-fitness matrix between labelled types. fitness(r, c) is the mean
/// fitness of row type r against column type c.
class MetaGame {
 public:
  MetaGame() = default;
  MetaGame(std::vector<std::string> labels, Eigen::MatrixXd fitness);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const Eigen::MatrixXd& fitness() const { return fitness_; }
  double operator()(int row, int col) const { return fitness_(row, col); }

  std::optional<int> find(std::string_view label) const;
  /// Throws std::out_of_range when the label is absent.
  int index(std::string_view label) const;

  /// Principal submatrix over `labels`, in the order given.
  MetaGame restrict_to(std::span<const std::string> labels) const;

  friend bool operator==(const MetaGame& a, const MetaGame& b) {
    return a.labels_ == b.labels_ && a.fitness_ == b.fitness_;
  }

 private:
  std::vector<std::string> labels_;
  Eigen::MatrixXd fitness_;
};

std::vector<std::string> labels_of(std::span<const PlayerType> types);

/// Expected fitness to the row player when both players pick uniformly at
/// random within their choice sets.
double match_fitness(const Game& game, ChoiceSet row, ChoiceSet col);
double match_fitness(const Game& game, PlayerType row, PlayerType col);

/// Exact average over all (N+1)^4 games with uniform weight. The enumeration
/// is split into `workers` contiguous blocks whose partial sums are added in
/// block order, so the result is bit-reproducible for a fixed worker count.
MetaGame build_metagame_exact(std::span<const PlayerType> types, int max_payoff, int workers = 1);

struct MonteCarloMetaGame {
  MetaGame mean;
  Eigen::MatrixXd std_error;  // per-entry standard error of the sample mean
  std::int64_t samples = 0;
};

/// Sample average over cfg.sample_count games, every type pair scored on the
/// same games. Worker w draws from its own stream seeded with seed ^ w; with
/// one worker the stream is seeded with cfg.seed itself.
MonteCarloMetaGame build_metagame_mc_detailed(std::span<const PlayerType> types,
                                              const GameClassConfig& cfg, int workers = 1);
MetaGame build_metagame_mc(std::span<const PlayerType> types, const GameClassConfig& cfg,
                           int workers = 1);

/// Preference-type game when both players share the epistemic type: FullSimplex
/// with probability q, FlatBelief otherwise. Requires all 8 player types in
/// `full`; output labels are the preference tags in canonical order.
MetaGame correlated_pref_metagame(const MetaGame& full, double q);

/// Preference-type game when each player is independently FullSimplex with
/// probability p.
MetaGame uncorrelated_pref_metagame(const MetaGame& full, double p);

struct RegretThreshold {
  double value = 0.0;
  bool never = false;  // no grid point works; value is then 1 + grid_step
};

/// Smallest p on {0, step, ..., 1} such that Regret is the unique ESS of the
/// uncorrelated preference game at p and at every grid point above it.
RegretThreshold find_regret_threshold(const MetaGame& full, double grid_step, double eta = 1e-9);

void to_json(nlohmann::json& j, const MetaGame& m);
void from_json(const nlohmann::json& j, MetaGame& m);

}  // namespace choiceevo

#endif  // CHOICEEVO_METAGAME_HPP
