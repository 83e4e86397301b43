#include <cmath>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/geometry.hpp"

using namespace recur;

TEST_CASE("coding and decoding are inverse on cylinders") {
  for (const auto& map : {MarkovExpandingMap::doubling(),
                          MarkovExpandingMap::cantor3(),
                          MarkovExpandingMap::slopes24()}) {
    const auto w = Word::parse("0110100", 2);
    const Interval cyl = decode(map, w);
    CHECK(cyl.length() > 0);
    const double mid = 0.5 * (cyl.lo + cyl.hi);
    CHECK(code(map, mid, w.size()) == w);
  }
}

TEST_CASE("cylinder lengths of linear maps are products of slopes") {
  const auto map = MarkovExpandingMap::slopes24();
  // Branch 0 has slope 2, branch 1 slope 4.
  CHECK(decode(map, Word::parse("01", 2)).length() ==
        doctest::Approx(1.0 / 8));
  CHECK(decode(map, Word::parse("110", 2)).length() ==
        doctest::Approx(1.0 / 32));
}

TEST_CASE("return times of a periodic orbit") {
  const auto map = MarkovExpandingMap::doubling();
  // 1/3 has period 2 under doubling.
  std::vector<Symbol> s;
  for (int i = 0; i < 200; ++i) s.push_back(i % 2);
  const auto orbit = orbit_from_word(map, Word(s, 2), 100);
  CHECK(orbit[0] == doctest::Approx(1.0 / 3));
  const std::vector<double> radii = {0.1, 0.01};
  const auto taus = return_times(orbit, radii);
  REQUIRE_FALSE(censored(taus[0]));
  CHECK(value_of(taus[0]) == 2);
  CHECK(value_of(taus[1]) == 2);
}

TEST_CASE("censoring when the horizon is too short") {
  const auto map = MarkovExpandingMap::doubling();
  std::vector<Symbol> s(200, 0);
  s[0] = 1;  // 1/2 -> 0 -> 0 ... never returns near 1/2
  const auto orbit = orbit_from_word(map, Word(s, 2), 50);
  const std::vector<double> radii = {0.01};
  CHECK(censored(return_times(orbit, radii)[0]));
}

TEST_CASE("linear maps have no distortion") {
  const auto dd = distortion_constants(MarkovExpandingMap::cantor3(), 6);
  CHECK(dd.distortion == doctest::Approx(1.0));
  CHECK(dd.kappa > 0);
  CHECK_FALSE(dd.full_branch_adjacent);
}

TEST_CASE("Birkhoff sums of log|Df| for linear maps") {
  const auto map = MarkovExpandingMap::slopes24();
  const auto w = Word::parse("0110", 2);
  CHECK(birkhoff_sum(map, w, 4) ==
        doctest::Approx(2 * std::log(2.0) + 2 * std::log(4.0)));
}

TEST_CASE("maps that do not expand are rejected") {
  CHECK_THROWS_AS(
      MarkovExpandingMap::linear_full("bad", {{0.0, 0.6}, {0.5, 1.0}}), Error);
}
