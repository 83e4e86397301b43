#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "recur/geometry.hpp"
#include "recur/insertion.hpp"

namespace recur {

struct LemmaTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t outer_size = 0;
  std::size_t n0 = 0;
  std::size_t k_max = 0;
  std::size_t violations = 0;
};

/// Randomized checks of R_k(g(w)) = l_k: random alphabet (fixed when
/// `alphabet` > 0), random special letters, random source word and random
/// admissible l-sequence, k up to the largest index with l_k + k <= limit.
std::vector<LemmaTrial> lemma_trials(std::size_t trials, std::size_t alphabet,
                                     std::uint64_t limit, std::uint64_t seed,
                                     InsertOptions options = {},
                                     std::size_t threads = 1);

struct SandwichRow {
  std::size_t point = 0;
  RecurrenceSandwichReport recurrence;
  BallCylinderReport ball;
};

struct SandwichSummary {
  DistortionData distortion;
  std::vector<SandwichRow> rows;
  std::size_t violations = 0;  // recurrence or ball inclusions failing
  std::size_t censored = 0;    // tau at the large radius not reached
};

/// Ball/cylinder inclusions and the recurrence sandwich at k = 1..k_max for
/// points drawn from the equilibrium state of -s log|Df|.
SandwichSummary sandwich_trials(const MarkovExpandingMap& map,
                                std::size_t points, std::size_t k_max,
                                std::uint64_t seed,
                                std::size_t word_length = 1u << 20,
                                std::size_t threads = 1);

}  // namespace recur
