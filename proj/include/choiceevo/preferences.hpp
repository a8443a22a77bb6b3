#ifndef CHOICEEVO_PREFERENCES_HPP
#define CHOICEEVO_PREFERENCES_HPP

#include <array>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "choiceevo/games.hpp"

namespace choiceevo {

// Declaration order is the canonical index order used by every matrix.
enum class PreferenceType { Actual = 0, Altruistic = 1, Competitive = 2, Regret = 3 };

inline constexpr std::array<PreferenceType, 4> kPreferenceTypes = {
    PreferenceType::Actual, PreferenceType::Altruistic, PreferenceType::Competitive,
    PreferenceType::Regret};

constexpr int index_of(PreferenceType p) { return static_cast<int>(p); }

/// Short tags: "pi", "alt", "com", "reg".
std::string_view tag(PreferenceType p);
PreferenceType parse_preference(std::string_view tag);

/// Subjective utility table: u[i][j] is the focal player's utility for own
/// action i against co-player action j.
struct SubjectiveMatrix {
  PreferenceType pref = PreferenceType::Actual;
  Payoffs2x2 u{};

  friend bool operator==(const SubjectiveMatrix&, const SubjectiveMatrix&) = default;
};

/// Actual:      u = pi(i,j)
/// Altruistic:  u = pi(i,j) + pi(j,i)
/// Competitive: u = pi(i,j) - pi(j,i)
/// Regret:      u = pi(i,j) - max_k pi(k,j)   (negative regret, <= 0)
SubjectiveMatrix transform(const Game& game, PreferenceType pref);

void to_json(nlohmann::json& j, const SubjectiveMatrix& m);

}  // namespace choiceevo

#endif  // CHOICEEVO_PREFERENCES_HPP
