#pragma once

#include <cstdint>
#include <random>

namespace cpd {

// Independent generator streams derived from one user seed, so that e.g. an
// instance generator and a solver given the same seed do not draw the same numbers.
enum class Stream : std::uint32_t {
  start_point = 1,
  quartic = 2,
  snl = 3,
  perturbation = 4,
  multistart = 5,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace cpd
