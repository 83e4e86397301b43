#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "recur/word.hpp"

namespace recur {

/// Integer sequence l_{n0}, ..., l_K used as prescribed repetition times.
struct EllSequence {
  std::size_t n0 = 2;
  std::vector<std::uint64_t> values;
  double target_lower = 0.0;
  double target_upper = 0.0;  // +infinity allowed
  bool capped = false;        // generation stopped at the value cap

  std::size_t first_index() const noexcept { return n0; }
  std::size_t last_index() const noexcept { return n0 + values.size() - 1; }
  std::uint64_t at(std::size_t k) const { return values.at(k - n0); }
  /// log(l_k) / k for every index.
  std::vector<double> log_rates() const;

  /// Checks l_{n+1} >= l_n + 2n, l_n >= n^3 and strict increase; throws
  /// InvalidArgument naming the first offending index.
  void validate() const;
};

constexpr std::uint64_t kNoCap = std::numeric_limits<std::uint64_t>::max();

/// Oscillating sequence with liminf/limsup of log(l_k)/k at the two rates.
/// Growth blocks jump to the curve exp(upper * k) (squaring when upper is
/// infinite); stall blocks add the minimal increment until the rate drops
/// to `lower` or the k^3 floor takes over.  Values above `cap` end the
/// sequence early.
EllSequence build_ell_sequence(double lower, double upper, std::size_t K,
                               std::size_t n0 = 2, std::uint64_t cap = kNoCap);

/// Tail-window rate extremes of an l-sequence: inf/sup of log(l_k)/k over
/// the last half of its index range.
struct RateWindow {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t from = 0;
  std::size_t to = 0;
};
RateWindow ell_rate_window(const EllSequence& ell);

/// Alphabets and special letters of the insertion map g.
struct InsertionSpec {
  std::vector<Symbol> inner_alphabet;  // letters a source word may use
  std::size_t outer_size = 0;          // the outer alphabet is 0..outer_size-1
  Symbol marker = 0;
  Symbol c = 0;
  Symbol c_bar = 0;

  void validate() const;
};

struct InsertOptions {
  /// Mutation knob for testing the verifier: always insert c.
  bool skip_y_rule = false;
};

struct Insertion {
  Word word;                    // first `horizon` letters of g(w)
  std::vector<bool> inserted;   // letter came from the marker or a block
  std::size_t stages = 0;       // blocks placed inside the horizon
  std::size_t source_used = 0;  // letters of w consumed
};

/// Letters of w needed to fill `horizon` letters of g(w).
std::size_t required_source_length(const EllSequence& ell,
                                   std::size_t horizon);

Insertion insert(const Word& w, const InsertionSpec& spec,
                 const EllSequence& ell, std::size_t horizon,
                 InsertOptions options = {});

struct LemmaViolation {
  std::size_t k = 0;
  std::uint64_t expected = 0;
  std::optional<std::size_t> actual;
};

struct LemmaReport {
  std::size_t k_lo = 0;
  std::size_t k_hi = 0;
  std::size_t horizon = 0;
  std::vector<LemmaViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/// Checks R_k(g(w)) == l_k for every k in [k_lo, k_hi].
LemmaReport verify_lemma_g(const Word& w, const InsertionSpec& spec,
                           const EllSequence& ell, std::size_t k_lo,
                           std::size_t k_hi, InsertOptions options = {});

/// Random admissible sequence for property trials, values with
/// l_k + k <= limit.  Targets are set to the realized rate extremes.
EllSequence random_ell_sequence(std::mt19937_64& rng, std::size_t n0,
                                std::uint64_t limit);

/// Largest k whose check fits a horizon: l_k + k <= horizon.
std::optional<std::size_t> largest_checkable_index(const EllSequence& ell,
                                                   std::size_t horizon);

}  // namespace recur
