#include "choiceevo/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace choiceevo {

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: bound must be positive");
  // Largest multiple of bound that fits; draws at or above it are rejected.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

double RandomStream::exponential() { return -std::log1p(-uniform01()); }

}  // namespace choiceevo
