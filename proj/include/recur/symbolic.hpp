#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "recur/word.hpp"

namespace recur {

/// Subshift of finite type given by a 0/1 transition matrix stored as
/// successor lists.
///
/// Every state is also labelled by a base word of fixed length (its block):
/// plain shifts have block length 1 and state i labelled by the symbol i,
/// higher-block recodings label state i by an n-block of the base alphabet.
/// Labels are kept as base-`base_alphabet` integer codes, first symbol most
/// significant, sorted ascending by state id.
class SubshiftOfFiniteType {
 public:
  using Edge = std::pair<Symbol, Symbol>;

  static SubshiftOfFiniteType full_shift(std::size_t alphabet_size);
  /// The golden-mean shift on {0,1}: the block "11" is forbidden.
  static SubshiftOfFiniteType golden_mean();
  static SubshiftOfFiniteType from_matrix(
      const std::vector<std::vector<int>>& matrix);
  static SubshiftOfFiniteType from_edges(std::size_t alphabet_size,
                                         std::vector<Edge> edges);
  /// Block presentation: `codes` sorted and unique, one per state.
  static SubshiftOfFiniteType from_blocks(std::size_t base_alphabet,
                                          std::size_t block_length,
                                          std::vector<std::uint64_t> codes,
                                          std::vector<Edge> edges);

  std::size_t alphabet_size() const noexcept { return codes_.size(); }
  std::size_t base_alphabet() const noexcept { return base_alphabet_; }
  std::size_t block_length() const noexcept { return block_length_; }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  std::span<const Symbol> successors(Symbol s) const {
    return {targets_.data() + offsets_[s], targets_.data() + offsets_[s + 1]};
  }
  std::span<const Symbol> predecessors(Symbol s) const {
    return {sources_.data() + in_offsets_[s],
            sources_.data() + in_offsets_[s + 1]};
  }
  bool allows(Symbol from, Symbol to) const;

  bool is_irreducible() const noexcept { return irreducible_; }
  bool is_primitive() const noexcept { return primitive_; }

  std::uint64_t code(Symbol state) const { return codes_[state]; }
  std::span<const std::uint64_t> codes() const noexcept { return codes_; }
  std::optional<Symbol> state_of_code(std::uint64_t code) const;
  /// The base word labelling a state.
  Word block(Symbol state) const;
  /// States whose block starts with `prefix` form a contiguous id range.
  std::pair<Symbol, Symbol> states_with_prefix(const Word& prefix) const;

  /// State path of a base word of length >= block_length, or nullopt when
  /// the word is not admissible.
  std::optional<std::vector<Symbol>> state_path(const Word& base) const;
  bool admits(const Word& base) const { return state_path(base).has_value(); }

  std::vector<Edge> edges() const;

 private:
  SubshiftOfFiniteType() = default;
  void build(std::vector<Edge> edges);

  std::size_t base_alphabet_ = 1;
  std::size_t block_length_ = 1;
  std::vector<std::uint64_t> codes_;
  std::vector<std::size_t> offsets_;
  std::vector<Symbol> targets_;
  std::vector<std::size_t> in_offsets_;
  std::vector<Symbol> sources_;
  bool irreducible_ = false;
  bool primitive_ = false;
};

/// Strongly connected components that carry at least one cycle, each
/// returned as a sorted list of states.
std::vector<std::vector<Symbol>> recurrent_components(
    const SubshiftOfFiniteType& sft);

/// Higher-block presentation on blocks of `length` base symbols
/// (length >= sft.block_length()).
SubshiftOfFiniteType recode(const SubshiftOfFiniteType& sft,
                            std::size_t length);

/// Smallest n > 0 with w[n, n+k) == w[0, k), scanning only inside w.
std::optional<std::size_t> repetition_time(const Word& w, std::size_t k);

/// R_k for every k = 1 .. |w|-1 at once (index k; index 0 unused).
/// Computed from the Z-array of w in linear time.
std::vector<std::optional<std::size_t>> repetition_times(
    std::span<const Symbol> w);

/// Smallest t > 0 such that the cylinder word `a` occurs at offset t.
std::optional<std::size_t> return_time_to_cylinder(const Word& w,
                                                   const Word& a);

struct ConnectingPaths {
  Symbol branch_symbol;  // a
  Word a;                // A = aB
  Word c;                // aC
};

ConnectingPaths find_connecting_paths(const SubshiftOfFiniteType& sft);
ConnectingPaths find_connecting_paths(const SubshiftOfFiniteType& sft,
                                      Symbol a);

struct ReturnEntry {
  Word word;  // the first `return_time` letters; A follows it
  std::size_t return_time;

  friend bool operator==(const ReturnEntry&, const ReturnEntry&) = default;
};

/// First-return words to the cylinder `base` with return time < bound.
struct ReturnAlphabet {
  Word base;
  std::vector<ReturnEntry> entries;
  std::optional<std::size_t> bounded_by;

  std::size_t size() const noexcept { return entries.size(); }
  std::size_t max_return_time() const;
  /// Concatenation of the entries' words followed by one copy of base.
  Word flatten(std::span<const Symbol> letters) const;
  /// Splits a word starting with base into entry indices, stopping at the
  /// last complete letter.  Letters whose return word is not in the
  /// alphabet yield nullopt.
  std::optional<std::vector<Symbol>> parse(const Word& w) const;
};

ReturnAlphabet induced_alphabet(const SubshiftOfFiniteType& sft,
                                const Word& a, std::size_t t_max);

/// Surviving sub-shift after deleting every sequence that ever shows one of
/// the hole words.  States are blocks of max(n, sft.block_length()) base
/// symbols; stranded states are trimmed.  An empty hole set returns `sft`.
SubshiftOfFiniteType remove_hole(const SubshiftOfFiniteType& sft,
                                 const std::vector<Word>& holes);

}  // namespace recur
