#include "recur/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <tuple>

#include "recur/error.hpp"

namespace recur {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(master) + index);
}

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t power(std::size_t base, std::size_t exp) {
  std::uint64_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) v *= base;
  return v;
}

}  // namespace

ChainSampler::ChainSampler(const EquilibriumState& mu)
    : sft_(mu.sft_ptr()), pi_(mu.stationary()) {
  const auto& sft = *sft_;
  const std::size_t n = sft.alphabet_size();
  offsets_.assign(n + 1, 0);
  for (Symbol s = 0; s < n; ++s)
    offsets_[s + 1] = offsets_[s] + sft.successors(s).size();
  cumulative_.resize(offsets_[n]);
  for (Symbol s = 0; s < n; ++s) {
    double acc = 0.0;
    auto succ = sft.successors(s);
    for (std::size_t i = 0; i < succ.size(); ++i) {
      acc += mu.transition(s, succ[i]);
      cumulative_[offsets_[s] + i] = acc;
    }
  }
  const auto top = power(sft.base_alphabet(), sft.block_length() - 1);
  first_symbol_.resize(n);
  for (Symbol s = 0; s < n; ++s)
    first_symbol_[s] = static_cast<Symbol>(sft.code(s) / top);
}

Word ChainSampler::sample(std::size_t length, std::uint64_t seed,
                          const Word* prefix) const {
  const auto& sft = *sft_;
  const std::size_t L = sft.block_length();
  std::mt19937_64 rng(seed);

  Symbol lo = 0, hi = static_cast<Symbol>(sft.alphabet_size());
  if (prefix) {
    require(prefix->size() <= L, ErrorKind::InvalidArgument,
            "start prefix longer than a block");
    std::tie(lo, hi) = sft.states_with_prefix(*prefix);
  }
  double total = 0.0;
  for (Symbol s = lo; s < hi; ++s) total += pi_[s];
  if (!(total > 0.0))
    fail(ErrorKind::ZeroMassCylinder, "start cylinder has zero mass");
  double u = uniform01(rng) * total;
  Symbol state = hi;
  for (Symbol s = lo; s < hi; ++s) {
    if (pi_[s] <= 0.0) continue;
    state = s;
    if (u < pi_[s]) break;
    u -= pi_[s];
  }

  std::vector<Symbol> out;
  out.reserve(length + L);
  for (;;) {
    if (out.size() + L >= length) {
      const Word block = sft.block(state);
      for (std::size_t i = 0; out.size() < length && i < L; ++i)
        out.push_back(block[i]);
      break;
    }
    out.push_back(first_symbol_[state]);
    const auto succ = sft.successors(state);
    const double* cum = cumulative_.data() + offsets_[state];
    const double v = uniform01(rng) * cum[succ.size() - 1];
    const auto idx = static_cast<std::size_t>(
        std::upper_bound(cum, cum + succ.size(), v) - cum);
    state = succ[std::min(idx, succ.size() - 1)];
  }
  while (out.size() < length) out.push_back(out.back());  // L > length only
  out.resize(length);
  return Word(std::move(out), sft.base_alphabet());
}

SourceConfig build_source(const MarkovExpandingMap& map, std::size_t n,
                          double birkhoff_tolerance, std::size_t psi_level,
                          const std::optional<Word>& cylinder) {
  require(n >= 1, ErrorKind::InvalidArgument, "n must be >= 1");
  require(birkhoff_tolerance > 0.0, ErrorKind::InvalidArgument,
          "Birkhoff tolerance must be positive");
  SourceConfig src;
  src.n = n;
  src.birkhoff_tolerance = birkhoff_tolerance;
  const auto& sft = map.shift();
  if (cylinder) {
    require(!cylinder->empty() && sft.admits(*cylinder),
            ErrorKind::InvalidArgument, "base cylinder is not admissible");
    src.paths.branch_symbol = (*cylinder)[0];
    src.paths.a = *cylinder;
    src.paths.c = *cylinder;
  } else {
    src.paths = find_connecting_paths(sft);
  }
  const Word& a = src.paths.a;
  src.dimension = bowen_dimension(map, psi_level).dimension;
  src.psi = log_derivative_potential(map, psi_level);

  const auto holes = long_return_holes(sft, a, n);
  src.hole_count = holes.size();
  SubshiftOfFiniteType survivor = sft;
  try {
    survivor = remove_hole(sft, holes);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptySurvivor)
      fail(ErrorKind::SourceInfeasible,
           "nothing survives the holes at n = " + std::to_string(n));
    throw;
  }
  if (survivor.block_length() < std::max(a.size(), psi_level))
    survivor = recode(survivor, std::max(a.size(), psi_level));
  const Potential phi = src.psi.scaled(-src.dimension);
  src.nu = std::make_shared<EquilibriumState>(equilibrium_state(survivor, phi));
  const auto& nu = *src.nu;
  src.mass_a = nu.cylinder_mass(a);
  if (!(src.mass_a > 1e-300))
    fail(ErrorKind::SourceInfeasible,
         "nu_n(A) = 0 at n = " + std::to_string(n) + "; increase n");
  src.pressure_gap = nu.pressure();
  src.entropy = nu.entropy();
  src.lambda = nu.integrate(src.psi.on_states(nu.sft()));
  require(src.lambda > 0.0, ErrorKind::NotExpanding,
          "Lyapunov exponent of the source is not positive");
  src.source_dimension = src.entropy / src.lambda;
  src.mean_return = kac_check(nu, a, n).mean_return;
  src.alphabet = induced_alphabet(sft, a, n);
  return src;
}

namespace {

// Induced parse of a base word: A occurrences are exactly the letter
// boundaries.  Returns starts of every A occurrence.
std::vector<std::size_t> a_occurrences(const Word& base, const Word& a) {
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p + a.size() <= base.size(); ++p)
    if (base.occurs_at(a, p)) out.push_back(p);
  return out;
}

double psi_sum(const Potential& psi, std::span<const Symbol> w,
               std::size_t count) {
  const std::size_t lvl = psi.level();
  const std::size_t B = psi.base_alphabet();
  double sum = 0.0;
  std::uint64_t code = 0;
  const std::uint64_t top = power(B, lvl - 1);
  for (std::size_t i = 0; i < lvl - 1; ++i) code = code * B + w[i];
  for (std::size_t j = 0; j < count; ++j) {
    code = (code % top) * B + w[j + lvl - 1];
    sum += psi.at_code(code);
  }
  return sum;
}

}  // namespace

SourceSample sample_source_point(const MarkovExpandingMap& map,
                                 const SourceConfig& source,
                                 std::size_t letters, std::uint64_t seed,
                                 std::size_t max_attempts,
                                 std::size_t prefix_from) {
  (void)map;
  require(letters >= 1, ErrorKind::InvalidArgument, "need at least one letter");
  const Word& a = source.a();
  const ChainSampler sampler(*source.nu);
  std::map<std::vector<Symbol>, Symbol> index;
  for (std::size_t i = 0; i < source.alphabet.size(); ++i) {
    auto s = source.alphabet.entries[i].word.symbols();
    index.emplace(std::vector<Symbol>(s.begin(), s.end()),
                  static_cast<Symbol>(i));
  }
  const double sd_guess = std::sqrt(static_cast<double>(letters)) *
                          static_cast<double>(source.n);
  std::size_t length = static_cast<std::size_t>(
      static_cast<double>(letters) * source.mean_return + 4.0 * sd_guess) +
      a.size() + source.psi.level() + 16;

  double best_miss = std::numeric_limits<double>::infinity();
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    Word base = sampler.sample(length, s, &a);
    auto occ = a_occurrences(base, a);
    if (occ.size() < letters + 1) {
      length += length / 2;
      --attempt;  // too short is not a miss
      continue;
    }
    SourceSample out;
    out.attempts = attempt + 1;
    out.letters.reserve(letters);
    for (std::size_t i = 0; i < letters; ++i) {
      auto sym = base.symbols().subspan(occ[i], occ[i + 1] - occ[i]);
      auto it = index.find(std::vector<Symbol>(sym.begin(), sym.end()));
      require(it != index.end(), ErrorKind::InadmissibleWord,
              "sample contains a return longer than the source bound");
      out.letters.push_back(it->second);
    }
    const std::size_t end = occ[letters] + a.size();
    const std::size_t steps = occ[letters];
    out.base = base.prefix(end);
    out.return_average =
        static_cast<double>(steps) / static_cast<double>(letters);
    const std::size_t count =
        std::min(steps, out.base.size() + 1 - source.psi.level());
    out.psi_average = psi_sum(source.psi, out.base.symbols(), count) /
                      static_cast<double>(count);
    double miss =
        std::max(std::abs(out.psi_average - source.lambda),
                 std::abs(out.return_average - source.mean_return));
    // Prefix averages of t, relative to the mean, from prefix_from letters on.
    for (std::size_t k = std::max<std::size_t>(prefix_from, 1);
         prefix_from && k <= letters && miss <= source.birkhoff_tolerance; ++k)
      miss = std::max(miss, std::abs(static_cast<double>(occ[k]) /
                                         (static_cast<double>(k) *
                                          source.mean_return) -
                                     1.0));
    if (miss <= source.birkhoff_tolerance) return out;
    best_miss = std::min(best_miss, miss);
  }
  fail(ErrorKind::BirkhoffMiss,
       "Birkhoff averages missed by " + std::to_string(best_miss) + " after " +
           std::to_string(max_attempts) + " samples; lengthen the sample");
}

void summarize_window(RecurrenceEstimate& est, std::size_t from,
                      std::size_t to, std::string policy) {
  require(!est.samples.empty(), ErrorKind::HorizonTooShort,
          "no usable scales for a rate estimate");
  to = std::min(to, est.samples.size() - 1);
  from = std::min(from, to);
  est.window_from = from;
  est.window_to = to;
  est.policy = std::move(policy);
  est.lower = std::numeric_limits<double>::infinity();
  est.upper = -est.lower;
  for (std::size_t i = from; i <= to; ++i) {
    est.lower = std::min(est.lower, est.samples[i].second);
    est.upper = std::max(est.upper, est.samples[i].second);
  }
}

void summarize_tail(RecurrenceEstimate& est) {
  const std::size_t n = est.samples.size();
  summarize_window(est, n / 2, n == 0 ? 0 : n - 1, "last-half");
}

RecurrenceEstimate geometric_rate(std::span<const double> orbit,
                                  std::span<const double> radii) {
  RecurrenceEstimate est;
  const auto taus = return_times(orbit, radii);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (censored(taus[i])) {
      ++est.censored;
      continue;
    }
    est.samples.emplace_back(
        radii[i], std::log(static_cast<double>(value_of(taus[i]))) /
                      -std::log(radii[i]));
  }
  if (!est.samples.empty()) summarize_tail(est);
  return est;
}

namespace {

std::vector<double> psi_prefix(const Potential& psi,
                               std::span<const Symbol> w) {
  const std::size_t lvl = psi.level();
  const std::size_t count = w.size() + 1 > lvl ? w.size() + 1 - lvl : 0;
  std::vector<double> out(count + 1, 0.0);
  const std::size_t B = psi.base_alphabet();
  const std::uint64_t top = power(B, lvl - 1);
  std::uint64_t code = 0;
  for (std::size_t i = 0; i + 1 < lvl; ++i) code = code * B + w[i];
  for (std::size_t j = 0; j < count; ++j) {
    code = (code % top) * B + w[j + lvl - 1];
    out[j + 1] = out[j] + psi.at_code(code);
  }
  return out;
}

}  // namespace

RecurrenceEstimate symbolic_rate(const MarkovExpandingMap& map,
                                 const Word& base,
                                 const std::vector<std::size_t>& scales) {
  RecurrenceEstimate est;
  const auto psi = log_derivative_potential(map, 1);
  const auto sums = psi_prefix(psi, base.symbols());
  const auto reps = repetition_times(base.symbols());
  for (std::size_t k : scales) {
    if (k == 0 || k >= reps.size() || k >= sums.size()) continue;
    if (!reps[k]) {
      ++est.censored;
      continue;
    }
    est.samples.emplace_back(
        static_cast<double>(k),
        std::log(static_cast<double>(*reps[k])) / sums[k]);
  }
  if (!est.samples.empty()) summarize_tail(est);
  return est;
}

std::optional<double> regression_rate(std::span<const ReturnTime> taus,
                                      std::span<const double> radii) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (censored(taus[i])) continue;
    const double x = -std::log(radii[i]);
    const double y = std::log(static_cast<double>(value_of(taus[i])));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double dm = static_cast<double>(m);
  const double den = dm * sxx - sx * sx;
  if (!(den > 0.0)) return std::nullopt;
  return (dm * sxy - sx * sy) / den;
}

bool ConstructedPoint::identities_hold() const {
  return !identities.empty() &&
         std::all_of(identities.begin(), identities.end(),
                     [](const IdentityCheck& c) { return c.holds; });
}

bool ConstructedPoint::perturbations_hold() const {
  return std::all_of(perturbations.begin(), perturbations.end(),
                     [](const PerturbationCheck& c) { return c.holds; });
}

namespace {

double ell_tolerance(std::size_t k) {
  return 3.0 * std::log(static_cast<double>(k)) / static_cast<double>(k);
}

// Outer induced alphabet: all letters with t < n, a marker with t >= n, and
// enough letters for c != c_bar.
struct OuterChoice {
  ReturnAlphabet alphabet;
  Symbol marker = 0;
  Symbol c = 0;
  Symbol c_bar = 0;
};

OuterChoice choose_outer(const SubshiftOfFiniteType& sft, const Word& a,
                         std::size_t n, std::size_t inner) {
  for (std::size_t bound = n + 1; bound <= n + 64; ++bound) {
    OuterChoice out;
    out.alphabet = induced_alphabet(sft, a, bound);
    std::vector<Symbol> spare;
    std::optional<Symbol> marker;
    for (std::size_t i = inner; i < out.alphabet.size(); ++i) {
      if (!marker) marker = static_cast<Symbol>(i);
      else spare.push_back(static_cast<Symbol>(i));
    }
    if (!marker) continue;
    std::vector<Symbol> pool;
    for (Symbol i = 0; i < inner; ++i) pool.push_back(i);
    pool.insert(pool.end(), spare.begin(), spare.end());
    if (pool.size() < 2) continue;
    out.marker = *marker;
    out.c = pool[0];
    out.c_bar = pool[1];
    return out;
  }
  fail(ErrorKind::EmptyAlphabet, "no marker letter with return time >= n");
}

}  // namespace

ConstructedPoint construct_E_point(const MarkovExpandingMap& map, double alpha,
                                   double beta, std::size_t n,
                                   std::size_t horizon, std::uint64_t seed,
                                   const ConstructOptions& options) {
  require(alpha >= 0.0 && beta >= alpha, ErrorKind::InvalidArgument,
          "need 0 <= alpha <= beta");
  require(horizon >= 16 && horizon <= 10000000, ErrorKind::InvalidArgument,
          "horizon must lie in [16, 1e7] letters");
  ConstructedPoint out;
  out.alpha = alpha;
  out.beta = beta;
  out.n = n;
  const auto src = build_source(map, n, options.birkhoff_tolerance,
                                options.psi_level, options.cylinder);
  out.lambda = src.lambda;
  out.mean_return = src.mean_return;
  const double scale = src.lambda * src.mean_return;
  out.rate_lower = alpha * scale;
  out.rate_upper = std::isinf(beta) ? beta : beta * scale;
  std::size_t n0 = options.n0;
  if (n0 == 0) {
    n0 = 2;
    const double room = std::log(0.5 * static_cast<double>(horizon));
    if (alpha < beta && std::isfinite(out.rate_upper) && out.rate_upper > 0.0) {
      // the first value sits on the upper curve at half the horizon
      n0 = std::max<std::size_t>(
          2, static_cast<std::size_t>(room / out.rate_upper));
    } else if (alpha == beta && out.rate_lower > 0.0) {
      // start where exp(rate k) overtakes the k^3 floor, if that fits
      std::size_t k = 2;
      while (out.rate_lower * static_cast<double>(k) <
             3.0 * std::log(static_cast<double>(k)))
        ++k;
      if (out.rate_lower * static_cast<double>(k) <= room) n0 = k;
    }
  }
  try {
    out.ell = build_ell_sequence(out.rate_lower, out.rate_upper,
                                 options.max_index, n0, horizon);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InfeasibleTarget)
      fail(ErrorKind::HorizonTooShort,
           std::string("l-sequence does not fit the horizon: ") + e.what());
    throw;
  }

  const std::size_t inner = src.alphabet.size();
  auto outer = choose_outer(map.shift(), src.a(), n, inner);
  for (std::size_t i = 0; i < inner; ++i)
    require(outer.alphabet.entries[i] == src.alphabet.entries[i],
            ErrorKind::InvalidArgument, "induced alphabets disagree");
  out.outer = outer.alphabet;
  out.marker = out.outer.entries[outer.marker].word;
  out.spec.outer_size = out.outer.size();
  for (Symbol i = 0; i < inner; ++i) out.spec.inner_alphabet.push_back(i);
  out.spec.marker = outer.marker;
  out.spec.c = outer.c;
  out.spec.c_bar = outer.c_bar;

  const std::size_t need = required_source_length(out.ell, horizon);
  // The upper extreme of an oscillating target sits near the first index,
  // where only a few source letters set the scale: control their averages.
  const bool oscillating = alpha < beta;
  out.source = sample_source_point(
      map, src, std::max<std::size_t>(need, 1), seed, oscillating ? 400 : 20,
      oscillating ? out.ell.first_index() : 0);
  const Word omega(out.source.letters, out.spec.outer_size);
  const auto g = insert(omega, out.spec, out.ell, horizon);
  out.letters.assign(g.word.symbols().begin(), g.word.symbols().end());
  out.base = out.outer.flatten(out.letters);
  out.x = point_of_word(map, out.base);

  auto t_of = [&](Symbol s) { return out.outer.entries[s].return_time; };
  std::vector<std::size_t> s_g(out.letters.size() + 1, 0);
  for (std::size_t i = 0; i < out.letters.size(); ++i)
    s_g[i + 1] = s_g[i] + t_of(out.letters[i]);

  // Exact identities at every accessible k.
  const auto acc = largest_checkable_index(out.ell, horizon);
  require(acc.has_value(), ErrorKind::HorizonTooShort,
          "horizon admits no checkable index");
  out.accessible = *acc;
  const auto induced_reps = repetition_times(std::span<const Symbol>(out.letters));
  const auto base_reps = repetition_times(out.base.symbols());
  const std::size_t A = src.a().size();
  for (std::size_t k = out.ell.first_index(); k <= out.accessible; ++k) {
    IdentityCheck c;
    c.k = k;
    c.ell = out.ell.at(k);
    c.induced_repetition = induced_reps[k];
    c.base_scale = s_g[k] + A;
    c.expected_base = s_g[c.ell];
    if (c.base_scale < base_reps.size()) c.base_repetition = base_reps[c.base_scale];
    c.holds = c.induced_repetition == c.ell &&
              c.base_repetition == c.expected_base;
    out.identities.push_back(c);
  }

  // Perturbation bound on induced return sums.
  std::vector<std::size_t> s_w(out.source.letters.size() + 1, 0);
  for (std::size_t i = 0; i < out.source.letters.size(); ++i)
    s_w[i + 1] = s_w[i] + t_of(out.source.letters[i]);
  const double n_bound = static_cast<double>(t_of(out.spec.marker));
  for (double kk = static_cast<double>(out.ell.at(out.ell.first_index()));
       kk <= static_cast<double>(out.letters.size()); kk *= 1.25) {
    const auto k = static_cast<std::size_t>(kk);
    if (k >= s_w.size()) break;
    std::size_t p = out.ell.first_index();
    while (p < out.ell.last_index() && out.ell.at(p + 1) <= k) ++p;
    const double pp = static_cast<double>(p + 2);
    PerturbationCheck c;
    c.k = k;
    c.deviation = std::abs(static_cast<double>(s_g[k]) -
                           static_cast<double>(s_w[k]));
    c.bound = static_cast<double>(k) * pp * pp /
              static_cast<double>(out.ell.at(p)) * n_bound;
    c.holds = c.deviation <= c.bound;
    out.perturbations.push_back(c);
  }

  // Symbolic rates log R_h / S_h psi at the scales h_k = S-hat_k t(g w).
  const auto sums = psi_prefix(src.psi, out.base.symbols());
  auto& est = out.symbolic;
  std::vector<std::size_t> ks;
  for (const auto& c : out.identities) {
    const std::size_t h = c.base_scale - A;
    if (h >= sums.size() || h >= base_reps.size() || !base_reps[h]) continue;
    est.samples.emplace_back(
        static_cast<double>(c.k),
        std::log(static_cast<double>(*base_reps[h])) / sums[h]);
    ks.push_back(c.k);
  }
  require(!ks.empty(), ErrorKind::HorizonTooShort, "no accessible scale");
  // Window: the final complete oscillation of the l-rates when the targets
  // differ, the last half otherwise.
  std::optional<std::size_t> lo_hit, up_hit;
  if (alpha != beta) {
    for (std::size_t i = ks.size(); i-- > 0;) {
      const std::size_t k = ks[i];
      const double r = std::log(static_cast<double>(out.ell.at(k))) /
                       static_cast<double>(k);
      if (!lo_hit) {
        if (r <= out.rate_lower + ell_tolerance(k)) lo_hit = i;
        continue;
      }
      // Growth steps are the jumps above the minimal increment.
      const bool peak =
          k == out.ell.first_index() ||
          out.ell.at(k) > std::max<std::uint64_t>(
                              static_cast<std::uint64_t>(k) * k * k,
                              out.ell.at(k - 1) + 2 * (k - 1));
      if (peak) {
        up_hit = i;
        break;
      }
    }
  }
  if (lo_hit && up_hit)
    summarize_window(est, *up_hit, ks.size() - 1,
                     "final-oscillation k=" + std::to_string(ks[*up_hit]) +
                         ".." + std::to_string(ks.back()));
  else
    summarize_tail(est);

  if (options.geometric) {
    const std::size_t tail = decode_tail(map);
    const std::size_t count = out.base.size() + 1 - tail;
    const auto orbit = orbit_from_word(map, out.base, count);
    std::vector<double> radii;
    std::vector<double> kidx;
    for (const auto& c : out.identities) {
      if (c.base_scale - A >= sums.size()) continue;
      radii.push_back(std::exp(-sums[c.base_scale - A]));
      kidx.push_back(static_cast<double>(c.k));
    }
    auto geo = geometric_rate(orbit, radii);
    RecurrenceEstimate matched;
    matched.censored = geo.censored;
    const auto taus = return_times(orbit, radii);
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (censored(taus[i])) continue;
      matched.samples.emplace_back(
          kidx[i], std::log(static_cast<double>(value_of(taus[i]))) /
                       -std::log(radii[i]));
    }
    if (!matched.samples.empty()) {
      if (est.policy == "last-half") summarize_tail(matched);
      else {
        std::size_t from = 0;
        while (from < matched.samples.size() &&
               matched.samples[from].first < est.samples[est.window_from].first)
          ++from;
        summarize_window(matched, from, matched.samples.size() - 1, est.policy);
      }
    }
    out.geometric = std::move(matched);
  }
  return out;
}

std::vector<double> dyadic_radii(int from, int to) {
  require(from <= to, ErrorKind::InvalidArgument, "empty radius grid");
  std::vector<double> out;
  for (int e = from; e <= to; ++e) out.push_back(std::ldexp(1.0, -e));
  return out;
}

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= v.size()) return v.back();
  return v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]);
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& body) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
  };
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      try {
        worker();
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

AeSummary ae_rate_experiment(const MarkovExpandingMap& map,
                             const Potential& phi, std::size_t sample_count,
                             std::size_t horizon, std::uint64_t seed,
                             const std::vector<double>& radii,
                             std::size_t threads) {
  require(sample_count >= 1 && horizon >= 2, ErrorKind::InvalidArgument,
          "need samples and a horizon");
  require(!radii.empty(), ErrorKind::InvalidArgument, "empty radius grid");
  const std::size_t level = std::max<std::size_t>(1, phi.level());
  const auto mu = equilibrium_state(map.shift(), phi);
  const auto psi = log_derivative_potential(map, level);
  const double lambda = mu.integrate(psi.on_states(mu.sft()));
  AeSummary out;
  out.radii = radii;
  out.target = mu.entropy() / lambda;
  out.rows.resize(sample_count);
  const ChainSampler sampler(mu);
  const std::size_t tail = decode_tail(map);
  parallel_for(sample_count, threads, [&](std::size_t i) {
    AeRow row;
    row.index = i;
    row.seed = derive_seed(seed, i);
    const Word w = sampler.sample(horizon + tail, row.seed);
    const auto orbit = orbit_from_word(map, w, horizon + 1);
    row.x = orbit[0];
    const auto taus = return_times(orbit, radii);
    row.rate = regression_rate(taus, radii);
    auto est = geometric_rate(orbit, radii);
    row.censored = est.censored;
    if (!est.samples.empty()) {
      row.ratio_lower = est.lower;
      row.ratio_upper = est.upper;
    }
    out.rows[i] = row;
  });
  std::vector<double> rates;
  for (const auto& r : out.rows)
    if (r.rate) rates.push_back(*r.rate);
  require(!rates.empty(), ErrorKind::Censored,
          "every sample was censored; raise the horizon");
  out.median = quantile(rates, 0.5);
  out.q1 = quantile(rates, 0.25);
  out.q3 = quantile(rates, 0.75);
  return out;
}

Ladder dimension_ladder(const MarkovExpandingMap& map,
                        const std::vector<std::size_t>& schedule,
                        std::size_t psi_level) {
  require(std::is_sorted(schedule.begin(), schedule.end()) &&
              std::adjacent_find(schedule.begin(), schedule.end()) ==
                  schedule.end(),
          ErrorKind::InvalidArgument, "schedule must be increasing");
  Ladder out;
  out.full_dimension = bowen_dimension(map, psi_level).dimension;
  double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
  for (std::size_t n : schedule) {
    LadderRow row;
    row.n = n;
    try {
      const auto src = build_source(map, n, 1.0, psi_level);
      row.feasible = true;
      row.pressure_gap = src.pressure_gap;
      row.dimension = src.source_dimension;
      row.lambda = src.lambda;
      row.hole_count = src.hole_count;
      const double gap = out.full_dimension - row.dimension;
      if (gap > 0.0) {
        const double x = static_cast<double>(n), y = std::log(gap);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        m += 1;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SourceInfeasible) throw;
      row.note = e.what();
    }
    out.rows.push_back(row);
  }
  if (m >= 2) out.gap_rate = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

}  // namespace recur
