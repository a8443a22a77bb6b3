#ifndef CHOICEEVO_CHOICE_HPP
#define CHOICEEVO_CHOICE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "choiceevo/games.hpp"
#include "choiceevo/preferences.hpp"

namespace choiceevo {

enum class EpistemicType { FlatBelief = 0, FullSimplex = 1 };

inline constexpr std::array<EpistemicType, 2> kEpistemicTypes = {EpistemicType::FlatBelief,
                                                                 EpistemicType::FullSimplex};

constexpr int index_of(EpistemicType e) { return static_cast<int>(e); }

/// "flat" or "simplex".
std::string_view tag(EpistemicType e);
EpistemicType parse_epistemic(std::string_view tag);

struct PlayerType {
  PreferenceType pref = PreferenceType::Actual;
  EpistemicType epistemic = EpistemicType::FlatBelief;

  /// 4 * epistemic index + preference index.
  constexpr int index() const { return 4 * index_of(epistemic) + index_of(pref); }

  /// e.g. "reg-simplex", "pi-flat".
  std::string label() const;

  friend bool operator==(const PlayerType&, const PlayerType&) = default;
};

PlayerType parse_player_type(std::string_view label);

/// All 8 player types in canonical index order.
std::vector<PlayerType> all_player_types();

/// Point belief: probability that the co-player plays action 0.
class Belief {
 public:
  explicit Belief(double p);
  double p() const { return p_; }

 private:
  double p_;
};

/// Non-empty subset of {0, 1}.
class ChoiceSet {
 public:
  static ChoiceSet of(std::initializer_list<int> actions);

  bool contains(int action) const { return (bits_ >> action) & 1U; }
  int size() const { return static_cast<int>(contains(0)) + static_cast<int>(contains(1)); }
  std::vector<int> actions() const;

  friend bool operator==(ChoiceSet, ChoiceSet) = default;

 private:
  explicit ChoiceSet(std::uint8_t bits) : bits_(bits) {}
  friend ChoiceSet argmax_set(const std::array<double, 2>& values);
  std::uint8_t bits_;
};

/// Both actions on an exact tie.
ChoiceSet argmax_set(const std::array<double, 2>& values);

/// Maximin expected utility per own action. FlatBelief: mean of the row.
/// FullSimplex: the expectation is linear in the belief, so its minimum over
/// the simplex sits at a vertex and equals the row minimum.
std::array<double, 2> action_values(const SubjectiveMatrix& u, EpistemicType epistemic);

ChoiceSet choose(const Game& game, PlayerType type);

/// Expected-utility argmax of the transformed game under a point belief.
ChoiceSet choose_with_belief(const Game& game, PreferenceType pref, Belief belief);

}  // namespace choiceevo

#endif  // CHOICEEVO_CHOICE_HPP
