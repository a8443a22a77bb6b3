#ifndef CHOICEEVO_STABILITY_HPP
#define CHOICEEVO_STABILITY_HPP

#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "choiceevo/metagame.hpp"

namespace choiceevo {

/// Default equality tolerance for matrices from the exact builder. Monte-Carlo
/// matrices need a caller-chosen tolerance.
inline constexpr double kExactTolerance = 1e-9;

enum class ViolatedCondition {
  Strict,                   // invader earns strictly more against the incumbent
  NeutralWithStrictSecond,  // tie against the incumbent, incumbent no better against the invader
};

std::string_view condition_name(ViolatedCondition c);

struct Invasion {
  int invader = 0;
  ViolatedCondition condition = ViolatedCondition::Strict;
};

struct StabilityReport {
  int index = 0;
  bool is_ess = false;
  bool is_neutrally_stable = false;
  std::vector<Invasion> violating_invaders;
};

/// Pure-type ESS test: for every j != i, m(i,i) > m(j,i), or m(i,i) = m(j,i)
/// and m(i,j) > m(j,j). Neutral stability replaces the second strict
/// inequality by >=. Values closer than `eta` count as equal.
StabilityReport is_ess(const MetaGame& m, int i, double eta = kExactTolerance);

/// Ascending indices of all ESS types.
std::vector<int> ess_set(const MetaGame& m, double eta = kExactTolerance);

void to_json(nlohmann::json& j, const StabilityReport& r);

}  // namespace choiceevo

#endif  // CHOICEEVO_STABILITY_HPP
