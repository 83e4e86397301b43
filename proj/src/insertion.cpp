#include "recur/insertion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "recur/error.hpp"
#include "recur/symbolic.hpp"

namespace recur {

namespace {

std::uint64_t cube(std::size_t k) {
  const auto v = static_cast<std::uint64_t>(k);
  return v * v * v;
}

// ceil(exp(x)), snapping to the nearest integer when exp(x) is within
// rounding of it; nullopt when the value would exceed `cap`.
std::optional<std::uint64_t> ceil_exp(double x, std::uint64_t cap) {
  const double v = std::exp(x);
  if (!(v < 1.8e19) || v > static_cast<double>(cap)) return std::nullopt;
  const double nearest = std::nearbyint(v);
  if (std::abs(v - nearest) <= 1e-9 * v)
    return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(v));
}

double tolerance(std::size_t k) {
  return 3.0 * std::log(static_cast<double>(k)) / static_cast<double>(k);
}

}  // namespace

std::vector<double> EllSequence::log_rates() const {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = std::log(static_cast<double>(values[i])) /
             static_cast<double>(n0 + i);
  return out;
}

void EllSequence::validate() const {
  require(!values.empty(), ErrorKind::InvalidArgument, "empty l-sequence");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t k = n0 + i;
    require(values[i] >= cube(k), ErrorKind::InvalidArgument,
            "l_" + std::to_string(k) + " < k^3");
    if (i + 1 < values.size()) {
      require(values[i + 1] > values[i], ErrorKind::InvalidArgument,
              "l-sequence not increasing at " + std::to_string(k));
      require(values[i + 1] >= values[i] + 2 * k, ErrorKind::InvalidArgument,
              "l_" + std::to_string(k + 1) + " < l_k + 2k");
    }
  }
}

EllSequence build_ell_sequence(double lower, double upper, std::size_t K,
                               std::size_t n0, std::uint64_t cap) {
  require(n0 >= 2 && K > n0, ErrorKind::InvalidArgument,
          "need K > n0 >= 2");
  require(lower >= 0.0 && upper >= lower, ErrorKind::InvalidArgument,
          "need 0 <= lower rate <= upper rate");
  const bool constant = lower == upper;
  const bool infinite = std::isinf(upper);
  require(!std::isinf(lower), ErrorKind::InvalidArgument,
          "lower rate must be finite");

  EllSequence ell;
  ell.n0 = n0;
  ell.target_lower = lower;
  ell.target_upper = upper;

  auto target = [&](double rate, std::size_t k) {
    return ceil_exp(rate * static_cast<double>(k), cap);
  };
  std::uint64_t first = cube(n0);
  if (!infinite) {
    auto v = target(upper, n0);
    if (!v) fail(ErrorKind::InfeasibleTarget, "first value exceeds the cap");
    first = std::max(first, *v);
  }
  if (first > cap) fail(ErrorKind::InfeasibleTarget, "cap below n0^3");
  ell.values.push_back(first);
  bool growing = infinite;  // finite targets start on the upper curve

  for (std::size_t k = n0 + 1; k <= K; ++k) {
    const std::uint64_t prev = ell.values.back();
    const std::uint64_t minimal = std::max(cube(k), prev + 2 * (k - 1));
    std::optional<std::uint64_t> next = minimal;
    if (constant) {
      auto curve = target(lower, k);
      next = curve ? std::optional(std::max(minimal, *curve)) : std::nullopt;
    } else if (growing) {
      if (infinite) {
        next = prev <= cap / prev ? std::optional(std::max(minimal, prev * prev))
                                  : std::nullopt;
      } else {
        auto curve = target(upper, k);
        next = curve ? std::optional(std::max(minimal, *curve)) : std::nullopt;
      }
      growing = false;
    }
    if (!next || *next > cap) {
      ell.capped = true;
      break;
    }
    ell.values.push_back(*next);
    if (!constant && !growing && next == minimal) {
      const double rate =
          std::log(static_cast<double>(*next)) / static_cast<double>(k);
      if (rate <= lower || *next == cube(k)) growing = true;
    }
  }

  if (!constant) {
    // Both targets must be met (within 3 log k / k) somewhere, the lower one
    // after the upper one.
    const auto rates = ell.log_rates();
    std::optional<std::size_t> hit_upper;
    bool hit_lower = false;
    for (std::size_t i = 0; i < rates.size(); ++i) {
      const std::size_t k = n0 + i;
      if (!hit_upper && (infinite ? i > 0 && rates[i] > rates[i - 1]
                                  : rates[i] >= upper - tolerance(k)))
        hit_upper = i;
      if (hit_upper && i > *hit_upper && rates[i] <= lower + tolerance(k))
        hit_lower = true;
    }
    if (!hit_upper || !hit_lower)
      fail(ErrorKind::InfeasibleTarget,
           "index range too short for one full oscillation between the "
           "target rates");
  }
  return ell;
}

RateWindow ell_rate_window(const EllSequence& ell) {
  const auto rates = ell.log_rates();
  RateWindow w;
  const std::size_t start = rates.size() / 2;
  w.from = ell.n0 + start;
  w.to = ell.last_index();
  w.lower = *std::min_element(rates.begin() + static_cast<std::ptrdiff_t>(start),
                              rates.end());
  w.upper = *std::max_element(rates.begin() + static_cast<std::ptrdiff_t>(start),
                              rates.end());
  return w;
}

void InsertionSpec::validate() const {
  require(outer_size >= 3, ErrorKind::InvalidArgument,
          "outer alphabet needs at least three letters");
  require(marker < outer_size && c < outer_size && c_bar < outer_size,
          ErrorKind::InvalidArgument, "special letter outside outer alphabet");
  require(c != c_bar && c != marker && c_bar != marker,
          ErrorKind::InvalidArgument, "need c != c_bar, both distinct from m");
  require(!inner_alphabet.empty(), ErrorKind::InvalidArgument,
          "empty inner alphabet");
  for (Symbol s : inner_alphabet) {
    require(s < outer_size, ErrorKind::InvalidArgument,
            "inner letter outside outer alphabet");
    require(s != marker, ErrorKind::InvalidArgument,
            "the marker must not belong to the inner alphabet");
  }
}

std::size_t required_source_length(const EllSequence& ell,
                                   std::size_t horizon) {
  std::size_t size = 1, used = 0;
  for (std::size_t k = ell.first_index(); k <= ell.last_index(); ++k) {
    const auto pos = ell.at(k);
    if (pos >= horizon) break;
    used += pos - size;
    size = pos + k + 1;
  }
  if (horizon > size) used += horizon - size;
  return used;
}

Insertion insert(const Word& w, const InsertionSpec& spec,
                 const EllSequence& ell, std::size_t horizon,
                 InsertOptions options) {
  spec.validate();
  ell.validate();
  require(horizon >= 1, ErrorKind::InvalidArgument, "empty horizon");
  const std::size_t last = ell.last_index();
  const std::uint64_t final_up_to =
      ell.capped ? kNoCap : ell.at(last) + 2 * last;
  require(horizon <= final_up_to, ErrorKind::InvalidArgument,
          "l-sequence ends before the horizon; the prefix would not be final");
  std::vector<bool> allowed(spec.outer_size, false);
  for (Symbol s : spec.inner_alphabet) allowed[s] = true;
  for (Symbol s : w.symbols())
    require(s < spec.outer_size && allowed[s], ErrorKind::InvalidArgument,
            "source word uses a letter outside the inner alphabet");
  const std::size_t need = required_source_length(ell, horizon);
  if (w.size() < need)
    fail(ErrorKind::HorizonTooShort,
         "source has " + std::to_string(w.size()) + " letters, need " +
             std::to_string(need));

  Insertion out;
  std::vector<Symbol> g;
  g.reserve(horizon + last + 1);
  out.inserted.reserve(horizon + last + 1);
  g.push_back(spec.marker);
  out.inserted.push_back(true);
  std::size_t src = 0;
  for (std::size_t k = ell.first_index(); k <= last; ++k) {
    const auto pos = ell.at(k);
    if (pos >= horizon) break;
    while (g.size() < pos) {
      g.push_back(w[src++]);
      out.inserted.push_back(false);
    }
    const Symbol following = g[k];
    const Symbol y = options.skip_y_rule || following != spec.c ? spec.c
                                                                : spec.c_bar;
    for (std::size_t i = 0; i < k; ++i) {
      g.push_back(g[i]);
      out.inserted.push_back(true);
    }
    g.push_back(y);
    out.inserted.push_back(true);
    ++out.stages;
  }
  while (g.size() < horizon) {
    g.push_back(w[src++]);
    out.inserted.push_back(false);
  }
  g.resize(horizon);
  out.inserted.resize(horizon);
  out.source_used = src;
  out.word = Word(std::move(g), spec.outer_size);
  return out;
}

EllSequence random_ell_sequence(std::mt19937_64& rng, std::size_t n0,
                                std::uint64_t limit) {
  require(n0 >= 2, ErrorKind::InvalidArgument, "n0 must be >= 2");
  require(cube(n0) + n0 <= limit, ErrorKind::InvalidArgument,
          "limit below the first admissible value");
  EllSequence ell;
  ell.n0 = n0;
  std::uniform_int_distribution<std::uint64_t> slack(0, 64);
  std::uniform_real_distribution<double> jump(1.0, 3.0);
  std::bernoulli_distribution grow(0.25);
  std::uint64_t v = cube(n0) + slack(rng);
  for (std::size_t k = n0; v + k <= limit; ++k) {
    ell.values.push_back(v);
    std::uint64_t next = std::max(cube(k + 1), v + 2 * k) + slack(rng);
    if (grow(rng))
      next = std::max(next, static_cast<std::uint64_t>(
                                static_cast<double>(v) * jump(rng)));
    v = next;
  }
  if (ell.values.empty()) ell.values.push_back(cube(n0));
  const auto rates = ell.log_rates();
  ell.target_lower = *std::min_element(rates.begin(), rates.end());
  ell.target_upper = *std::max_element(rates.begin(), rates.end());
  return ell;
}

std::optional<std::size_t> largest_checkable_index(const EllSequence& ell,
                                                   std::size_t horizon) {
  std::optional<std::size_t> best;
  for (std::size_t k = ell.first_index(); k <= ell.last_index(); ++k)
    if (ell.at(k) + k <= horizon) best = k;
  return best;
}

LemmaReport verify_lemma_g(const Word& w, const InsertionSpec& spec,
                           const EllSequence& ell, std::size_t k_lo,
                           std::size_t k_hi, InsertOptions options) {
  require(k_lo >= ell.first_index() && k_lo <= k_hi &&
              k_hi <= ell.last_index(),
          ErrorKind::InvalidArgument, "k range outside the l-sequence");
  LemmaReport report;
  report.k_lo = k_lo;
  report.k_hi = k_hi;
  report.horizon = ell.at(k_hi) + k_hi;
  const auto g = insert(w, spec, ell, report.horizon, options);
  const auto reps = repetition_times(g.word.symbols());
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const auto actual = reps[k];
    if (!actual || *actual != ell.at(k))
      report.violations.push_back({k, ell.at(k), actual});
  }
  return report;
}

}  // namespace recur
