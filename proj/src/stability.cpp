#include "choiceevo/stability.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace choiceevo {

std::string_view condition_name(ViolatedCondition c) {
  switch (c) {
    case ViolatedCondition::Strict: return "strict";
    case ViolatedCondition::NeutralWithStrictSecond: return "neutral-with-strict-second";
  }
  throw std::logic_error("unknown condition");
}

StabilityReport is_ess(const MetaGame& m, int i, double eta) {
  if (i < 0 || i >= m.size())
    throw std::out_of_range("is_ess: index " + std::to_string(i) + " out of range");
  if (!(eta >= 0.0)) throw std::invalid_argument("is_ess: tolerance must be >= 0");

  StabilityReport report;
  report.index = i;
  report.is_neutrally_stable = true;
  for (int j = 0; j < m.size(); ++j) {
    if (j == i) continue;
    const double first = m(i, i) - m(j, i);
    if (first > eta) continue;
    if (first < -eta) {
      report.violating_invaders.push_back({j, ViolatedCondition::Strict});
      report.is_neutrally_stable = false;
      continue;
    }
    const double second = m(i, j) - m(j, j);
    if (second > eta) continue;
    report.violating_invaders.push_back({j, ViolatedCondition::NeutralWithStrictSecond});
    if (second < -eta) report.is_neutrally_stable = false;
  }
  report.is_ess = report.violating_invaders.empty();
  return report;
}

std::vector<int> ess_set(const MetaGame& m, double eta) {
  std::vector<int> out;
  for (int i = 0; i < m.size(); ++i)
    if (is_ess(m, i, eta).is_ess) out.push_back(i);
  return out;
}

void to_json(nlohmann::json& j, const StabilityReport& r) {
  nlohmann::json invaders = nlohmann::json::array();
  for (const auto& v : r.violating_invaders)
    invaders.push_back({{"invader", v.invader}, {"condition", std::string(condition_name(v.condition))}});
  j = nlohmann::json{{"index", r.index},
                     {"is_ess", r.is_ess},
                     {"is_neutrally_stable", r.is_neutrally_stable},
                     {"violating_invaders", std::move(invaders)}};
}

}  // namespace choiceevo
