#include <random>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/symbolic.hpp"

using namespace recur;

namespace {

std::optional<std::size_t> naive_repetition(const std::vector<Symbol>& w,
                                            std::size_t k) {
  for (std::size_t n = 1; n + k <= w.size(); ++n) {
    bool same = true;
    for (std::size_t i = 0; i < k && same; ++i) same = w[n + i] == w[i];
    if (same) return n;
  }
  return std::nullopt;
}

Word word_of(std::uint64_t bits, std::size_t len) {
  std::vector<Symbol> s(len);
  for (std::size_t i = 0; i < len; ++i) s[i] = (bits >> (len - 1 - i)) & 1;
  return Word(s, 2);
}

bool contains(const Word& w, const Word& h) {
  for (std::size_t p = 0; p + h.size() <= w.size(); ++p)
    if (w.occurs_at(h, p)) return true;
  return false;
}

}  // namespace

TEST_CASE("Z-array repetition times agree with a direct scan") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t alphabet = 1 + rng() % 3;
    const std::size_t len = 1 + rng() % 80;
    std::vector<Symbol> w(len);
    for (auto& s : w) s = static_cast<Symbol>(rng() % alphabet);
    const auto fast = repetition_times(w);
    for (std::size_t k = 1; k < len; ++k) {
      CHECK(fast[k] == naive_repetition(w, k));
      CHECK(repetition_time(Word(w, alphabet), k) == naive_repetition(w, k));
    }
  }
}

TEST_CASE("repetition time of a periodic word is its period") {
  const auto w = Word::parse("011011011011011", 2);
  CHECK(repetition_time(w, 3) == 3u);
  CHECK(repetition_time(w, 12) == 3u);
  CHECK_FALSE(repetition_time(w, 13).has_value());
}

TEST_CASE("hole removal matches brute force on short words") {
  // Hole words share one length.
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const std::vector<std::vector<Word>> cases = {
      {Word::parse("11", 2)},
      {Word::parse("111", 2)},
      {Word::parse("001", 2), Word::parse("111", 2)},
      {Word::parse("0110", 2), Word::parse("0101", 2)},
      {Word::parse("1", 2)},
  };
  for (const auto& holes : cases) {
    const auto survivor = remove_hole(full, holes);
    // A word survives when it avoids every hole and extends far enough
    // to the right without meeting one (stranded prefixes are dropped).
    constexpr std::size_t len = 9, ext = 10;
    for (std::uint64_t b = 0; b < (1u << len); ++b) {
      const Word w = word_of(b, len);
      bool extends = false;
      for (std::uint64_t e = 0; e < (1u << ext) && !extends; ++e) {
        const Word we = w.concat(word_of(e, ext));
        bool clean = true;
        for (const auto& h : holes) clean = clean && !contains(we, h);
        extends = clean;
      }
      CHECK_MESSAGE(survivor.admits(w) == extends, w.to_string());
    }
  }
}

TEST_CASE("removing everything is reported") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  CHECK_THROWS_AS(remove_hole(full, {Word::parse("0", 2), Word::parse("1", 2)}),
                  Error);
}

TEST_CASE("connecting paths and the induced alphabet on the full 2-shift") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto paths = find_connecting_paths(full);
  CHECK(paths.a.to_string() == "0");
  const auto alpha = induced_alphabet(full, paths.a, 4);
  // Return words 0, 01, 011 to [0] with t < 4.
  REQUIRE(alpha.size() == 3);
  for (const auto& e : alpha.entries) {
    CHECK(e.word.size() == e.return_time);
    CHECK(e.word[0] == 0);
  }
  std::vector<Symbol> letters = {2, 0, 1};
  const Word flat = alpha.flatten(letters);
  const auto parsed = alpha.parse(flat);
  REQUIRE(parsed.has_value());
  CHECK(*parsed == letters);
}

TEST_CASE("recoding preserves admissible words") {
  const auto g = SubshiftOfFiniteType::golden_mean();
  const auto r = recode(g, 3);
  CHECK(r.block_length() == 3);
  for (std::uint64_t b = 0; b < 64; ++b) {
    const Word w = word_of(b, 6);
    CHECK(r.admits(w) == g.admits(w));
  }
}

TEST_CASE("bad input is rejected") {
  CHECK_THROWS_AS(Word::parse("012", 2), Error);
  CHECK_THROWS_AS(SubshiftOfFiniteType::from_edges(2, {{0, 2}}), Error);
}
