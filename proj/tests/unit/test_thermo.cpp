#include <cmath>

#include "doctest.h"
#include "recur/error.hpp"
#include "recur/thermo.hpp"

using namespace recur;

namespace {

// Largest real root of x^n = x^{n-1} + ... + 1, by bisection on [1, 2].
double ones_root(std::size_t n) {
  auto f = [n](double x) {
    double rhs = 0, p = 1;
    for (std::size_t i = 0; i < n; ++i, p *= x) rhs += p;
    return p - rhs;
  };
  double lo = 1, hi = 2;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (lo + hi);
    (f(m) > 0 ? hi : lo) = m;
  }
  return lo;
}

// Root of sum_i r_i^s = 1 by Newton from s = 0.5.
double similarity_root(std::vector<double> ratios) {
  double s = 0.5;
  for (int i = 0; i < 100; ++i) {
    double f = -1, df = 0;
    for (double r : ratios) {
      f += std::pow(r, s);
      df += std::pow(r, s) * std::log(r);
    }
    s -= f / df;
  }
  return s;
}

}  // namespace

TEST_CASE("pressure benchmarks") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  CHECK(pressure(full, Potential::constant(2, 0.0)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(pressure(SubshiftOfFiniteType::golden_mean(), Potential::constant(2, 0.0)) ==
        doctest::Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  const auto bern =
      Potential::from_symbol_values({std::log(0.3), std::log(0.7)});
  CHECK(std::abs(pressure(full, bern)) < 1e-12);
  // Adding a constant shifts the pressure by it.
  CHECK(pressure(full, Potential::constant(2, 0.25)) ==
        doctest::Approx(std::log(2.0) + 0.25).epsilon(1e-12));
}

TEST_CASE("equilibrium state of a Bernoulli potential") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto mu = equilibrium_state(
      full, Potential::from_symbol_values({std::log(0.3), std::log(0.7)}));
  CHECK(mu.cylinder_mass(Word::parse("0", 2)) == doctest::Approx(0.3));
  CHECK(mu.cylinder_mass(Word::parse("01", 2)) == doctest::Approx(0.21));
  const double h = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7));
  CHECK(mu.entropy() == doctest::Approx(h).epsilon(1e-10));
  CHECK(mu.entropy() + mu.mean_potential() ==
        doctest::Approx(mu.pressure()).epsilon(1e-10));
}

TEST_CASE("holes [1^n] on the 2-shift follow the n-bonacci roots") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto zero = Potential::constant(2, 0.0);
  double prev = -1;
  for (std::size_t n = 2; n <= 20; ++n) {
    const double p = pressure_with_holes(
        full, zero, {Word(std::vector<Symbol>(n, 1), 2)});
    CHECK(std::abs(p - std::log(ones_root(n))) < 1e-9);
    CHECK(p > prev);
    prev = p;
  }
  CHECK(std::log(2.0) - prev < 0.01);
}

TEST_CASE("Bowen dimension against closed forms") {
  CHECK(std::abs(bowen_dimension(MarkovExpandingMap::doubling()).dimension - 1) <
        1e-10);
  CHECK(std::abs(bowen_dimension(MarkovExpandingMap::cantor3()).dimension -
                 std::log(2.0) / std::log(3.0)) < 1e-8);
  CHECK(std::abs(bowen_dimension(MarkovExpandingMap::slopes24()).dimension -
                 similarity_root({0.5, 0.25})) < 1e-8);
}

TEST_CASE("Kac: nu(A) times the mean return time is one") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto mu = equilibrium_state(full, Potential::constant(2, 0.0));
  const auto kac = kac_check(mu, Word::parse("00", 2), 22);
  CHECK(kac.cylinder_mass == doctest::Approx(0.25));
  CHECK(std::abs(kac.product - 1) <= kac.tail_bound + 1e-9);
}

TEST_CASE("long-return holes shrink in measure") {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto mu = equilibrium_state(full, Potential::constant(2, 0.0));
  const auto decay = hole_measure_decay(mu, Word::parse("0", 2), 10);
  for (std::size_t i = 1; i < decay.rows.size(); ++i)
    CHECK(decay.rows[i].second <= decay.rows[i - 1].second);
  CHECK(decay.log_rate < 0);
}
