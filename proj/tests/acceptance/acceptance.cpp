// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>

#include "recur/error.hpp"
#include "recur/spectrum.hpp"
#include "recur/thermo.hpp"
#include "recur/verify.hpp"

using namespace recur;

namespace {

const std::size_t kThreads =
    std::max(1u, std::thread::hardware_concurrency());

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  const bool rising = f(hi) > f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0) == rising ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome lemma() {
  const auto rows = lemma_trials(1000, 0, 1000000, 1, {}, kThreads);
  std::size_t violations = 0, checked = 0, k_top = 0;
  for (const auto& r : rows) {
    violations += r.violations;
    checked += r.k_max >= r.n0 ? r.k_max - r.n0 + 1 : 0;
    k_top = std::max(k_top, r.k_max);
  }
  return {violations == 0 && rows.size() == 1000,
          "trials=1000 k-checks=" + std::to_string(checked) +
              " max-k=" + std::to_string(k_top) +
              " violations=" + std::to_string(violations)};
}

Outcome pressures() {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const double p1 = pressure(full, Potential::constant(2, 0.0));
  const double p2 = pressure(SubshiftOfFiniteType::golden_mean(),
                             Potential::constant(2, 0.0));
  const double p3 = pressure(
      full, Potential::from_symbol_values({std::log(0.3), std::log(0.7)}));
  const double e1 = std::abs(p1 - std::log(2.0));
  const double e2 = std::abs(p2 - std::log((1 + std::sqrt(5.0)) / 2));
  const double e3 = std::abs(p3);
  return {e1 <= 1e-10 && e2 <= 1e-10 && e3 <= 1e-10,
          "errors full=" + f6(e1) + " golden=" + f6(e2) + " bernoulli=" + f6(e3)};
}

Outcome holes() {
  const auto full = SubshiftOfFiniteType::full_shift(2);
  const auto zero = Potential::constant(2, 0.0);
  double worst = 0, prev = -INFINITY, last = 0;
  bool increasing = true;
  for (std::size_t n = 1; n <= 20; ++n) {
    const double p =
        pressure_with_holes(full, zero, {Word(std::vector<Symbol>(n, 1), 2)});
    const double root = bisect(
        [n](double x) {
          double rhs = 0, pw = 1;
          for (std::size_t i = 0; i < n; ++i, pw *= x) rhs += pw;
          return pw - rhs;
        },
        1.0, 2.0);
    worst = std::max(worst, std::abs(p - std::log(root)));
    increasing = increasing && p > prev;
    prev = last = p;
  }
  const double gap = std::log(2.0) - last;
  return {worst <= 1e-9 && increasing && gap < 0.01,
          "max-error=" + f6(worst) + " increasing=" + (increasing ? "yes" : "no") +
              " gap20=" + f6(gap)};
}

Outcome bowen() {
  const double d1 = bowen_dimension(MarkovExpandingMap::doubling()).dimension;
  const double d2 = bowen_dimension(MarkovExpandingMap::cantor3()).dimension;
  const double d3 = bowen_dimension(MarkovExpandingMap::slopes24()).dimension;
  const double r3 = bisect(
      [](double s) { return std::pow(2.0, -s) + std::pow(4.0, -s) - 1; }, 0, 1);
  const double e1 = std::abs(d1 - 1), e2 = std::abs(d2 - std::log(2.0) / std::log(3.0)),
               e3 = std::abs(d3 - r3);
  return {e1 <= 1e-10 && e2 <= 1e-8 && e3 <= 1e-8,
          "errors doubling=" + f6(e1) + " slope3=" + f6(e2) + " slopes24=" + f6(e3)};
}

Outcome ae() {
  const auto map = MarkovExpandingMap::doubling();
  const auto radii = dyadic_radii(5, 16);
  const auto leb = ae_rate_experiment(
      map, log_derivative_potential(map, 1).scaled(-1), 100, 1000000, 1, radii,
      kThreads);
  const auto bern = ae_rate_experiment(
      map, Potential::from_symbol_values({std::log(0.3), std::log(0.7)}), 100,
      1000000, 1, radii, kThreads);
  const double h = -(0.3 * std::log(0.3) + 0.7 * std::log(0.7)) / std::log(2.0);
  const bool ok = std::abs(leb.median - 1) <= 0.1 &&
                  std::abs(bern.median - h) <= 0.1 &&
                  std::abs(bern.target - h) < 1e-9;
  return {ok, "lebesgue median=" + f6(leb.median) + " (target 1) bernoulli median=" +
                  f6(bern.median) + " (target " + f6(h) + ")"};
}

Outcome construct() {
  struct Target {
    double alpha, beta;
    std::size_t n;
    const char* cylinder;
  };
  const Target targets[] = {{0, 0, 16, "000"}, {0.3, 0.3, 4, "0"}, {0.3, 0.8, 3, "0"}};
  const auto map = MarkovExpandingMap::doubling();
  bool ok = true;
  std::string detail;
  for (const auto& t : targets) {
    ConstructOptions opt;
    opt.cylinder = Word::parse(t.cylinder, 2);
    const auto p = construct_E_point(map, t.alpha, t.beta, t.n, 1000000, 1, opt);
    const bool hit = std::abs(p.symbolic.lower - t.alpha) <= 0.1 &&
                     std::abs(p.symbolic.upper - t.beta) <= 0.1;
    ok = ok && hit && p.identities_hold();
    detail += "(" + f6(t.alpha) + "," + f6(t.beta) + ")->[" + f6(p.symbolic.lower) +
              "," + f6(p.symbolic.upper) + "] identities k<=" +
              std::to_string(p.accessible) + (p.identities_hold() ? " ok; " : " FAIL; ");
  }
  return {ok, detail};
}

Outcome ladder() {
  std::vector<std::size_t> schedule;
  for (std::size_t n = 4; n <= 14; ++n) schedule.push_back(n);
  const auto l = dimension_ladder(MarkovExpandingMap::slopes24(), schedule);
  bool dim_up = true, gap_down = true, feasible = true;
  for (std::size_t i = 0; i < l.rows.size(); ++i) {
    feasible = feasible && l.rows[i].feasible;
    if (i == 0) continue;
    dim_up = dim_up && l.rows[i].dimension > l.rows[i - 1].dimension;
    gap_down = gap_down && std::abs(l.rows[i].pressure_gap) <
                               std::abs(l.rows[i - 1].pressure_gap);
  }
  const double final_gap = l.full_dimension - l.rows.back().dimension;
  const double last_p = l.rows.back().pressure_gap;
  return {feasible && dim_up && gap_down && final_gap < 0.01 && final_gap >= 0,
          "dim14=" + f6(l.rows.back().dimension) + " full=" + f6(l.full_dimension) +
              " gap=" + f6(final_gap) + " P14=" + f6(last_p) +
              " monotone=" + (dim_up && gap_down ? "yes" : "no")};
}

Outcome sandwich() {
  bool ok = true;
  std::string detail;
  for (const auto& map : {MarkovExpandingMap::cantor3(), MarkovExpandingMap::slopes24()}) {
    const auto s = sandwich_trials(map, 50, 14, 1, 1u << 20, kThreads);
    ok = ok && s.violations == 0 && s.rows.size() == 700;
    detail += map.name() + ": rows=" + std::to_string(s.rows.size()) +
              " violations=" + std::to_string(s.violations) +
              " censored=" + std::to_string(s.censored) + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;  // 0 runs all
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "insertion lemma exactness", 60, lemma},
      {2, "pressure benchmarks", 10, pressures},
      {3, "hole family [1^n] convergence", 60, holes},
      {4, "Bowen dimension", 10, bowen},
      {5, "a.e. recurrence rate law", 600, ae},
      {6, "E(alpha,beta) construction", 600, construct},
      {7, "dimension ladder", 300, ladder},
      {8, "ball/cylinder and recurrence sandwich", 300, sandwich},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s [%d] %s: %s time=%.1fs%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str(), secs,
                in_time ? "" : " (over budget)");
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
