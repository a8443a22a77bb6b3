#ifndef CHOICEEVO_RANDOM_HPP
#define CHOICEEVO_RANDOM_HPP

#include <cstdint>
#include <random>

namespace choiceevo {

// Seeded stream over std::mt19937_64. The engine's output sequence is fixed
// by the standard; the integer and real mappings below are implemented here
// (not via <random> distributions) so a seed reproduces the same draws on
// every standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on {0, ..., bound - 1} by rejection of the biased tail.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard exponential via inversion, -log(1 - u).
  double exponential();

 private:
  std::mt19937_64 engine_;
};

}  // namespace choiceevo

#endif  // CHOICEEVO_RANDOM_HPP
