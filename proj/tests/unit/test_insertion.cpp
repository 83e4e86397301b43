#include <cmath>
#include <random>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/insertion.hpp"
#include "recur/symbolic.hpp"
#include "recur/verify.hpp"

using namespace recur;

namespace {

InsertionSpec spec3() {
  InsertionSpec s;
  s.outer_size = 3;
  s.inner_alphabet = {0, 1};
  s.marker = 2;
  s.c = 0;
  s.c_bar = 1;
  return s;
}

Word random_source(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Symbol> s(n);
  for (auto& x : s) x = rng() % 2;
  return Word(s, 3);
}

}  // namespace

TEST_CASE("l-sequence invariants for a feasible oscillating target") {
  const auto ell = build_ell_sequence(0.6, 1.2, 4000);
  ell.validate();
  for (std::size_t k = ell.first_index(); k < ell.last_index(); ++k) {
    CHECK(ell.at(k) >= k * k * k);
    CHECK(ell.at(k + 1) >= ell.at(k) + 2 * k);
  }
  const auto w = ell_rate_window(ell);
  CHECK(w.lower == doctest::Approx(0.6).epsilon(0.05));
  CHECK(w.upper == doctest::Approx(1.2).epsilon(0.05));
}

TEST_CASE("constant targets and the cap") {
  const auto ell = build_ell_sequence(0.5, 0.5, 3000);
  const auto w = ell_rate_window(ell);
  CHECK(std::abs(w.lower - 0.5) < 0.02);
  CHECK(std::abs(w.upper - 0.5) < 0.02);
  const auto capped = build_ell_sequence(0.5, 0.5, 3000, 2, 1000000);
  CHECK(capped.capped);
  CHECK(capped.values.back() <= 1000000u);
}

TEST_CASE("invalid sequences and specs are rejected") {
  EllSequence bad;
  bad.n0 = 2;
  bad.values = {8, 9};  // needs l_3 >= l_2 + 4
  CHECK_THROWS_AS(bad.validate(), Error);
  auto s = spec3();
  s.c_bar = s.c;
  CHECK_THROWS_AS(s.validate(), Error);
  s = spec3();
  s.marker = 0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("insertion realizes the prescribed repetition times") {
  const auto ell = build_ell_sequence(0.4, 0.9, 200, 2, 200000);
  const auto k_hi = largest_checkable_index(ell, 200000);
  REQUIRE(k_hi.has_value());
  const auto spec = spec3();
  const auto w = random_source(required_source_length(ell, ell.at(*k_hi) + *k_hi), 5);
  const auto report = verify_lemma_g(w, spec, ell, ell.first_index(), *k_hi);
  CHECK(report.ok());
  // The inserted block copies the prefix right at position l_k.
  const auto g = insert(w, spec, ell, 5000);
  CHECK(g.word[0] == spec.marker);
  const std::size_t k = ell.first_index();
  for (std::size_t i = 0; i < k; ++i) CHECK(g.word[ell.at(k) + i] == g.word[i]);
}

TEST_CASE("a short source is a horizon error") {
  const auto ell = build_ell_sequence(0.4, 0.9, 200, 2, 200000);
  try {
    insert(random_source(10, 1), spec3(), ell, 5000);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::HorizonTooShort);
  }
}

TEST_CASE("randomized trials pass and the mutant is caught") {
  const auto rows = lemma_trials(40, 0, 200000, 3);
  for (const auto& r : rows) {
    CHECK(r.violations == 0);
    CHECK(r.k_max >= r.n0);
  }
  InsertOptions mutant;
  mutant.skip_y_rule = true;
  std::size_t caught = 0;
  for (const auto& r : lemma_trials(40, 0, 200000, 3, mutant)) caught += r.violations > 0;
  CHECK(caught > 20);
}

TEST_CASE("trials are reproducible") {
  const auto a = lemma_trials(5, 4, 50000, 9);
  const auto b = lemma_trials(5, 4, 50000, 9, {}, 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].k_max == b[i].k_max);
    CHECK(a[i].outer_size == 4);
  }
}
