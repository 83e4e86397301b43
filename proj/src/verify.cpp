#include "recur/verify.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <random>
#include <thread>

#include "recur/error.hpp"
#include "recur/spectrum.hpp"
#include "recur/thermo.hpp"

namespace recur {

namespace {

template <class F>
void run_indexed(std::size_t count, std::size_t threads, F&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      next = count;
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<LemmaTrial> lemma_trials(std::size_t trials, std::size_t alphabet,
                                     std::uint64_t limit, std::uint64_t seed,
                                     InsertOptions options,
                                     std::size_t threads) {
  require(alphabet == 0 || alphabet >= 3, ErrorKind::InvalidArgument,
          "the outer alphabet needs at least three letters");
  std::vector<LemmaTrial> out(trials);
  run_indexed(trials, threads, [&](std::size_t t) {
    LemmaTrial row;
    row.trial = t;
    row.seed = derive_seed(seed, t);
    std::mt19937_64 rng(row.seed);
    row.outer_size =
        alphabet ? alphabet
                 : std::uniform_int_distribution<std::size_t>(3, 6)(rng);
    InsertionSpec spec;
    spec.outer_size = row.outer_size;
    const auto inner = static_cast<Symbol>(row.outer_size - 1);
    for (Symbol s = 0; s < inner; ++s) spec.inner_alphabet.push_back(s);
    spec.marker = inner;
    std::uniform_int_distribution<Symbol> pick(0, inner - 1);
    spec.c = pick(rng);
    do spec.c_bar = pick(rng);
    while (spec.c_bar == spec.c);

    row.n0 = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    const auto ell = random_ell_sequence(rng, row.n0, limit);
    const auto k_max = largest_checkable_index(ell, limit);
    if (!k_max) {
      out[t] = row;
      return;
    }
    row.k_max = *k_max;
    const std::size_t need =
        required_source_length(ell, ell.at(*k_max) + *k_max);
    // Low-entropy sources (long runs) stress the y rule harder.
    std::vector<Symbol> w(need);
    std::bernoulli_distribution stay(
        std::uniform_real_distribution<double>(0.0, 0.95)(rng));
    Symbol cur = pick(rng);
    for (auto& s : w) {
      if (!stay(rng)) cur = pick(rng);
      s = cur;
    }
    const auto report = verify_lemma_g(Word(std::move(w), row.outer_size),
                                       spec, ell, row.n0, *k_max, options);
    row.violations = report.violations.size();
    out[t] = row;
  });
  return out;
}

SandwichSummary sandwich_trials(const MarkovExpandingMap& map,
                                std::size_t points, std::size_t k_max,
                                std::uint64_t seed, std::size_t word_length,
                                std::size_t threads) {
  require(points >= 1 && k_max >= 1, ErrorKind::InvalidArgument,
          "need points and k_max >= 1");
  SandwichSummary out;
  out.distortion = distortion_constants(map, std::max<std::size_t>(k_max, 4));
  const auto dim = bowen_dimension(map).dimension;
  const auto mu = equilibrium_state(
      map.shift(), log_derivative_potential(map, 1).scaled(-dim));
  const ChainSampler sampler(mu);
  std::vector<std::vector<SandwichRow>> per_point(points);
  std::vector<std::vector<char>> thrown(points);
  run_indexed(points, threads, [&](std::size_t p) {
    const Word w = sampler.sample(word_length, derive_seed(seed, p));
    for (std::size_t k = 1; k <= k_max; ++k) {
      SandwichRow row;
      row.point = p;
      row.ball = ball_cylinder_sandwich_check(map, out.distortion, w, k);
      try {
        row.recurrence = recurrence_sandwich_check(map, out.distortion, w, k);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Censored) throw;
        thrown[p].resize(k_max, 0);
        thrown[p][k - 1] = 1;
        row.recurrence.k = k;
        row.recurrence.holds = false;
      }
      per_point[p].push_back(row);
    }
  });
  for (std::size_t p = 0; p < points; ++p) {
    for (auto& row : per_point[p]) {
      const std::size_t k = row.recurrence.k;
      const bool cut = (!thrown[p].empty() && thrown[p][k - 1]) ||
                       censored(row.recurrence.tau_large);
      if (cut) ++out.censored;
      if (!row.ball.holds() || (!cut && !row.recurrence.holds))
        ++out.violations;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

}  // namespace recur
