#include "choiceevo/metagame.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <thread>

#include "choiceevo/stability.hpp"

namespace choiceevo {

MetaGame::MetaGame(std::vector<std::string> labels, Eigen::MatrixXd fitness)
    : labels_(std::move(labels)), fitness_(std::move(fitness)) {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  if (fitness_.rows() != n || fitness_.cols() != n)
    throw std::invalid_argument("MetaGame: fitness must be square with one row per label");
  if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
    throw std::invalid_argument("MetaGame: labels must be distinct");
  if (!fitness_.allFinite()) throw std::invalid_argument("MetaGame: entries must be finite");
}

std::optional<int> MetaGame::find(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

int MetaGame::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw std::out_of_range("MetaGame: no type labelled '" + std::string(label) + "'");
}

MetaGame MetaGame::restrict_to(std::span<const std::string> labels) const {
  std::vector<int> idx;
  for (const auto& l : labels) idx.push_back(index(l));
  Eigen::MatrixXd sub(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = fitness_(idx[r], idx[c]);
  return MetaGame({labels.begin(), labels.end()}, std::move(sub));
}

std::vector<std::string> labels_of(std::span<const PlayerType> types) {
  std::vector<std::string> labels;
  for (const auto& t : types) labels.push_back(t.label());
  return labels;
}

double match_fitness(const Game& game, ChoiceSet row, ChoiceSet col) {
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    if (!row.contains(a)) continue;
    for (int b = 0; b < 2; ++b)
      if (col.contains(b)) total += game.payoff[a][b];
  }
  return total / static_cast<double>(row.size() * col.size());
}

double match_fitness(const Game& game, PlayerType row, PlayerType col) {
  return match_fitness(game, choose(game, row), choose(game, col));
}

namespace {

void check_types(std::span<const PlayerType> types) {
  if (types.empty()) throw std::invalid_argument("meta-game needs at least one type");
  for (std::size_t i = 0; i < types.size(); ++i)
    for (std::size_t k = i + 1; k < types.size(); ++k)
      if (types[i] == types[k]) throw std::invalid_argument("meta-game types must be distinct");
}

void check_workers(int workers) {
  if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
}

struct Accumulator {
  Eigen::MatrixXd sum;
  Eigen::MatrixXd sum_sq;

  explicit Accumulator(Eigen::Index n) : sum(Eigen::MatrixXd::Zero(n, n)), sum_sq(Eigen::MatrixXd::Zero(n, n)) {}

  void add(const Game& game, std::span<const PlayerType> types, std::vector<ChoiceSet>& scratch) {
    scratch.clear();
    for (const auto& t : types) scratch.push_back(choose(game, t));
    const auto n = static_cast<Eigen::Index>(types.size());
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        const double v = match_fitness(game, scratch[r], scratch[c]);
        sum(r, c) += v;
        sum_sq(r, c) += v * v;
      }
  }
};

// Runs body(w) for w in [0, workers) and returns the per-worker results.
template <typename Body>
std::vector<Accumulator> run_workers(int workers, Eigen::Index n, Body body) {
  std::vector<Accumulator> partials(static_cast<std::size_t>(workers), Accumulator(n));
  if (workers == 1) {
    body(0, partials[0]);
    return partials;
  }
  std::vector<std::thread> threads;
  threads.reserve(partials.size());
  for (int w = 0; w < workers; ++w)
    threads.emplace_back([&, w] { body(w, partials[static_cast<std::size_t>(w)]); });
  for (auto& t : threads) t.join();
  return partials;
}

std::int64_t block_begin(std::int64_t total, int workers, int w) {
  const std::int64_t base = total / workers;
  const std::int64_t extra = total % workers;
  return w * base + std::min<std::int64_t>(w, extra);
}

}  // namespace

MetaGame build_metagame_exact(std::span<const PlayerType> types, int max_payoff, int workers) {
  check_types(types);
  check_workers(workers);
  const std::int64_t count = game_count(max_payoff);
  const auto n = static_cast<Eigen::Index>(types.size());

  auto partials = run_workers(workers, n, [&](int w, Accumulator& acc) {
    std::vector<ChoiceSet> scratch;
    const std::int64_t end = block_begin(count, workers, w + 1);
    for (std::int64_t g = block_begin(count, workers, w); g < end; ++g)
      acc.add(game_at(g, max_payoff), types, scratch);
  });

  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : partials) total += p.sum;
  return MetaGame(labels_of(types), total / static_cast<double>(count));
}

MonteCarloMetaGame build_metagame_mc_detailed(std::span<const PlayerType> types,
                                              const GameClassConfig& cfg, int workers) {
  check_types(types);
  check_workers(workers);
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(types.size());

  auto partials = run_workers(workers, n, [&](int w, Accumulator& acc) {
    RandomStream rng(cfg.seed ^ static_cast<std::uint64_t>(w));
    std::vector<ChoiceSet> scratch;
    const std::int64_t draws =
        block_begin(cfg.sample_count, workers, w + 1) - block_begin(cfg.sample_count, workers, w);
    for (std::int64_t s = 0; s < draws; ++s) acc.add(sample_game(rng, cfg.max_payoff), types, scratch);
  });

  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : partials) {
    sum += p.sum;
    sum_sq += p.sum_sq;
  }
  const auto count = static_cast<double>(cfg.sample_count);
  Eigen::MatrixXd mean = sum / count;
  Eigen::MatrixXd std_error = Eigen::MatrixXd::Zero(n, n);
  if (cfg.sample_count > 1) {
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) {
        const double var = std::max(0.0, (sum_sq(r, c) - count * mean(r, c) * mean(r, c)) / (count - 1.0));
        std_error(r, c) = std::sqrt(var / count);
      }
  }
  return {MetaGame(labels_of(types), std::move(mean)), std::move(std_error), cfg.sample_count};
}

MetaGame build_metagame_mc(std::span<const PlayerType> types, const GameClassConfig& cfg,
                           int workers) {
  return build_metagame_mc_detailed(types, cfg, workers).mean;
}

namespace {

void check_probability(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

// Index in `full` of every player type, keyed by PlayerType::index().
std::array<int, 8> player_indices(const MetaGame& full) {
  std::array<int, 8> idx{};
  for (const auto& t : all_player_types()) {
    const auto i = full.find(t.label());
    if (!i) throw std::invalid_argument("meta-game lacks player type '" + t.label() + "'");
    idx[static_cast<std::size_t>(t.index())] = *i;
  }
  return idx;
}

std::vector<std::string> preference_labels() {
  std::vector<std::string> labels;
  for (PreferenceType p : kPreferenceTypes) labels.emplace_back(tag(p));
  return labels;
}

// Mixes the 8-type matrix into a preference game given a weight for every
// (row epistemic, column epistemic) pair.
MetaGame mix_epistemic(const MetaGame& full, const std::array<std::array<double, 2>, 2>& weight) {
  const auto idx = player_indices(full);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4, 4);
  for (PreferenceType rp : kPreferenceTypes)
    for (PreferenceType cp : kPreferenceTypes) {
      double v = 0.0;
      for (EpistemicType re : kEpistemicTypes)
        for (EpistemicType ce : kEpistemicTypes) {
          const double w = weight[index_of(re)][index_of(ce)];
          if (w == 0.0) continue;
          v += w * full(idx[PlayerType{rp, re}.index()], idx[PlayerType{cp, ce}.index()]);
        }
      out(index_of(rp), index_of(cp)) = v;
    }
  return MetaGame(preference_labels(), std::move(out));
}

}  // namespace

MetaGame correlated_pref_metagame(const MetaGame& full, double q) {
  check_probability(q, "q");
  const int flat = index_of(EpistemicType::FlatBelief);
  const int simplex = index_of(EpistemicType::FullSimplex);
  std::array<std::array<double, 2>, 2> w{};
  w[simplex][simplex] = q;
  w[flat][flat] = 1.0 - q;
  return mix_epistemic(full, w);
}

MetaGame uncorrelated_pref_metagame(const MetaGame& full, double p) {
  check_probability(p, "p");
  std::array<double, 2> marginal{};
  marginal[index_of(EpistemicType::FullSimplex)] = p;
  marginal[index_of(EpistemicType::FlatBelief)] = 1.0 - p;
  std::array<std::array<double, 2>, 2> w{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) w[a][b] = marginal[a] * marginal[b];
  return mix_epistemic(full, w);
}

RegretThreshold find_regret_threshold(const MetaGame& full, double grid_step, double eta) {
  if (!(grid_step > 0.0 && grid_step <= 0.01))
    throw std::invalid_argument("grid step must lie in (0, 0.01]");
  const double steps_real = 1.0 / grid_step;
  const auto steps = static_cast<std::int64_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-6)
    throw std::invalid_argument("grid step must divide 1 evenly");
  player_indices(full);

  const int regret = index_of(PreferenceType::Regret);
  auto regret_unique = [&](std::int64_t k) {
    const double p = static_cast<double>(k) / static_cast<double>(steps);
    const auto set = ess_set(uncorrelated_pref_metagame(full, p), eta);
    return set.size() == 1 && set.front() == regret;
  };

  // Walk down from p = 1 while the predicate keeps holding.
  std::int64_t k = steps;
  if (!regret_unique(k)) return {1.0 + grid_step, true};
  while (k > 0 && regret_unique(k - 1)) --k;
  return {static_cast<double>(k) / static_cast<double>(steps), false};
}

void to_json(nlohmann::json& j, const MetaGame& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.fitness().rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.fitness().cols(); ++c) row.push_back(m.fitness()(r, c));
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{{"labels", m.labels()}, {"fitness", std::move(rows)}};
}

void from_json(const nlohmann::json& j, MetaGame& m) {
  auto labels = j.at("labels").get<std::vector<std::string>>();
  const auto& rows = j.at("fitness");
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (static_cast<Eigen::Index>(rows.size()) != n)
    throw std::invalid_argument("MetaGame JSON: fitness row count differs from label count");
  Eigen::MatrixXd fitness(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    if (static_cast<Eigen::Index>(rows[r].size()) != n)
      throw std::invalid_argument("MetaGame JSON: fitness must be square");
    for (Eigen::Index c = 0; c < n; ++c) fitness(r, c) = rows[r][c].get<double>();
  }
  m = MetaGame(std::move(labels), std::move(fitness));
}

}  // namespace choiceevo
