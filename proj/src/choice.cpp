#include "choiceevo/choice.hpp"

#include <algorithm>
#include <stdexcept>

namespace choiceevo {

std::string_view tag(EpistemicType e) {
  switch (e) {
    case EpistemicType::FlatBelief: return "flat";
    case EpistemicType::FullSimplex: return "simplex";
  }
  throw std::logic_error("unknown epistemic type");
}

EpistemicType parse_epistemic(std::string_view s) {
  for (EpistemicType e : kEpistemicTypes)
    if (tag(e) == s) return e;
  throw std::invalid_argument("unknown epistemic tag '" + std::string(s) + "'");
}

std::string PlayerType::label() const {
  return std::string(tag(pref)) + "-" + std::string(tag(epistemic));
}

PlayerType parse_player_type(std::string_view label) {
  const auto dash = label.find('-');
  if (dash == std::string_view::npos)
    throw std::invalid_argument("player type label '" + std::string(label) + "' lacks '-'");
  return PlayerType{parse_preference(label.substr(0, dash)),
                    parse_epistemic(label.substr(dash + 1))};
}

std::vector<PlayerType> all_player_types() {
  std::vector<PlayerType> types;
  for (EpistemicType e : kEpistemicTypes)
    for (PreferenceType p : kPreferenceTypes) types.push_back({p, e});
  return types;
}

Belief::Belief(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("Belief: p must lie in [0, 1]");
}

ChoiceSet ChoiceSet::of(std::initializer_list<int> actions) {
  std::uint8_t bits = 0;
  for (int a : actions) {
    if (a != 0 && a != 1) throw std::invalid_argument("ChoiceSet: actions are 0 or 1");
    bits |= static_cast<std::uint8_t>(1U << a);
  }
  if (bits == 0) throw std::invalid_argument("ChoiceSet: must be non-empty");
  return ChoiceSet(bits);
}

std::vector<int> ChoiceSet::actions() const {
  std::vector<int> out;
  for (int a = 0; a < 2; ++a)
    if (contains(a)) out.push_back(a);
  return out;
}

ChoiceSet argmax_set(const std::array<double, 2>& values) {
  if (values[0] > values[1]) return ChoiceSet(0b01);
  if (values[1] > values[0]) return ChoiceSet(0b10);
  return ChoiceSet(0b11);
}

std::array<double, 2> action_values(const SubjectiveMatrix& m, EpistemicType epistemic) {
  std::array<double, 2> values{};
  for (int i = 0; i < 2; ++i) {
    values[i] = epistemic == EpistemicType::FlatBelief ? (m.u[i][0] + m.u[i][1]) / 2.0
                                                       : std::min(m.u[i][0], m.u[i][1]);
  }
  return values;
}

ChoiceSet choose(const Game& game, PlayerType type) {
  return argmax_set(action_values(transform(game, type.pref), type.epistemic));
}

ChoiceSet choose_with_belief(const Game& game, PreferenceType pref, Belief belief) {
  const SubjectiveMatrix m = transform(game, pref);
  const double p = belief.p();
  // Compare through per-column differences. Shifting a column by a constant
  // (as the regret transform does) leaves them bit-identical.
  const double advantage =
      p * (m.u[0][0] - m.u[1][0]) + (1.0 - p) * (m.u[0][1] - m.u[1][1]);
  return argmax_set({advantage, 0.0});
}

}  // namespace choiceevo
