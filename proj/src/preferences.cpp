#include "choiceevo/preferences.hpp"

#include <algorithm>
#include <stdexcept>

namespace choiceevo {

std::string_view tag(PreferenceType p) {
  switch (p) {
    case PreferenceType::Actual: return "pi";
    case PreferenceType::Altruistic: return "alt";
    case PreferenceType::Competitive: return "com";
    case PreferenceType::Regret: return "reg";
  }
  throw std::logic_error("unknown preference type");
}

PreferenceType parse_preference(std::string_view s) {
  for (PreferenceType p : kPreferenceTypes)
    if (tag(p) == s) return p;
  throw std::invalid_argument("unknown preference tag '" + std::string(s) + "'");
}

SubjectiveMatrix transform(const Game& game, PreferenceType pref) {
  SubjectiveMatrix out{pref, {}};
  const auto& pi = game.payoff;
  for (int j = 0; j < 2; ++j) {
    const double best_reply = std::max(pi[0][j], pi[1][j]);
    for (int i = 0; i < 2; ++i) {
      double& u = out.u[i][j];
      switch (pref) {
        case PreferenceType::Actual: u = pi[i][j]; break;
        case PreferenceType::Altruistic: u = pi[i][j] + pi[j][i]; break;
        case PreferenceType::Competitive: u = pi[i][j] - pi[j][i]; break;
        case PreferenceType::Regret: u = pi[i][j] - best_reply; break;
      }
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const SubjectiveMatrix& m) {
  j = nlohmann::json{{"pref", std::string(tag(m.pref))},
                     {"u", {{m.u[0][0], m.u[0][1]}, {m.u[1][0], m.u[1][1]}}}};
}

}  // namespace choiceevo
