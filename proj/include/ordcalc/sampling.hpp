#pragma once

// Seeded random assignments into Z, used to spot-check VALID verdicts.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ordcalc/freegroup.hpp"
#include "ordcalc/term.hpp"

namespace ordcalc {

inline constexpr std::uint64_t kDefaultSeed = 20231;

/// ORDCALC_SEED when set to an integer, else a fixed default.
inline std::uint64_t sampling_seed() {
  if (const char* s = std::getenv("ORDCALC_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
    }
  }
  return kDefaultSeed;
}

/// Returns an assignment (values in [-range, range]) under which the join of `words` is
/// negative, or nullopt after `samples` misses.
inline std::optional<std::vector<std::int64_t>> find_negative_assignment(std::span<const ReducedWord> words, int k,
                                                                         std::size_t samples, std::mt19937_64& rng,
                                                                         std::int64_t range = 10) {
  std::uniform_int_distribution<std::int64_t> dist(-range, range);
  std::vector<std::int64_t> y(static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& v : y) v = dist(rng);
    if (evaluate_join(words, y) < 0) return y;
  }
  return std::nullopt;
}

}  // namespace ordcalc
