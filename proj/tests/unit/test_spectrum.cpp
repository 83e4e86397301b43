#include <cmath>
#include <set>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/spectrum.hpp"
#include "recur/verify.hpp"

using namespace recur;

TEST_CASE("derived seeds do not collide across nearby masters") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 50; ++m)
    for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(m, i));
  CHECK(seen.size() == 2500);
}

TEST_CASE("chain samples follow the equilibrium state") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto mu = equilibrium_state(
      full, Potential::from_symbol_values({std::log(0.3), std::log(0.7)}));
  const auto w = ChainSampler(mu).sample(200000, 4);
  double zeros = 0;
  for (Symbol s : w.symbols()) zeros += s == 0;
  CHECK(zeros / 200000 == doctest::Approx(0.3).epsilon(0.02));
}

TEST_CASE("source of large dimension") {
  const auto map = MarkovExpandingMap::doubling();
  const auto src = build_source(map, 6);
  CHECK(src.a().to_string() == "0");
  CHECK(src.pressure_gap < 0);
  CHECK(src.source_dimension < 1);
  CHECK(src.source_dimension > 0.9);
  CHECK(src.mass_a * src.mean_return == doctest::Approx(1).epsilon(1e-6));
  // With a long cylinder the A-free part dominates.
  try {
    build_source(map, 16, 0.05, 1, Word::parse("0000", 2));
    FAIL("expected SourceInfeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SourceInfeasible);
  }
}

TEST_CASE("constructed points satisfy the induced identity") {
  const auto map = MarkovExpandingMap::doubling();
  ConstructOptions opt;
  opt.cylinder = Word::parse("0", 2);
  const auto p = construct_E_point(map, 0.3, 0.8, 3, 100000, 1, opt);
  CHECK(p.identities_hold());
  CHECK(p.perturbations_hold());
  CHECK(p.accessible >= p.ell.first_index());
  CHECK(p.x >= 0);
  CHECK(p.x <= 1);
  CHECK_THROWS_AS(construct_E_point(map, 0.8, 0.3, 3, 100000, 1, opt), Error);
}

TEST_CASE("regression slope of exact power laws") {
  const auto radii = dyadic_radii(2, 8);
  CHECK(radii.size() == 7);
  std::vector<ReturnTime> taus;
  for (double r : radii)
    taus.emplace_back(static_cast<std::size_t>(std::llround(std::pow(r, -0.5) * 64)));
  const auto slope = regression_rate(taus, radii);
  REQUIRE(slope.has_value());
  CHECK(*slope == doctest::Approx(0.5).epsilon(0.01));
  std::vector<ReturnTime> cut(radii.size(), Censored{10});
  CHECK_FALSE(regression_rate(cut, radii).has_value());
}

TEST_CASE("dimension ladder approaches the full dimension") {
  const auto map = MarkovExpandingMap::slopes24();
  const auto ladder = dimension_ladder(map, {4, 6, 8, 10});
  double prev = 0;
  for (const auto& r : ladder.rows) {
    REQUIRE(r.feasible);
    CHECK(r.dimension > prev);
    CHECK(r.pressure_gap < 0);
    prev = r.dimension;
  }
  CHECK(ladder.full_dimension - prev < 0.01);
}

TEST_CASE("sandwich checks on a Cantor repeller") {
  const auto s = sandwich_trials(MarkovExpandingMap::cantor3(), 3, 8, 2, 1u << 16);
  CHECK(s.rows.size() == 24);
  CHECK(s.violations == 0);
}
