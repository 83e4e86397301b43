#include "recur/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "recur/error.hpp"

namespace recur {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kMaxDenseCodes = std::uint64_t{1} << 26;

std::uint64_t power(std::size_t base, std::size_t exponent) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    require(out <= kMaxDenseCodes, ErrorKind::InvalidArgument,
            "potential level too large for a dense table");
    out *= base;
  }
  return out;
}

std::uint64_t encode(const Word& w) {
  std::uint64_t code = 0;
  for (Symbol s : w.symbols()) code = code * w.alphabet_size() + s;
  return code;
}

// Base words of the form A u (|u| = t) with A at offset t and nowhere in
// between, for 1 <= t < t_max.  `admissible` prunes dead prefixes.
template <typename Admissible, typename Visit>
void for_each_return_word(std::size_t base_alphabet, const Word& a,
                          std::size_t t_max, Admissible admissible,
                          Visit visit) {
  std::vector<Symbol> word(a.symbols().begin(), a.symbols().end());
  std::vector<Symbol> next{0};
  const std::size_t m = a.size();
  while (!next.empty()) {
    Symbol& choice = next.back();
    if (choice == base_alphabet || word.size() >= m + t_max - 1) {
      next.pop_back();
      if (word.size() > m) word.pop_back();
      continue;
    }
    word.push_back(choice++);
    const Word w(word, base_alphabet);
    if (!admissible(w)) {
      word.pop_back();
      continue;
    }
    const std::size_t t = word.size() - m;
    if (w.occurs_at(a, t)) {
      visit(Word({word.begin(), word.begin() + static_cast<std::ptrdiff_t>(t)},
                 base_alphabet),
            t);
      word.pop_back();
      continue;
    }
    next.push_back(0);
  }
}

// Words of length n - 1 + |A| starting with A and avoiding A at offsets
// 1 .. n-1.
template <typename Admissible>
std::vector<Word> avoiding_words(std::size_t base_alphabet, const Word& a,
                                 std::size_t n, Admissible admissible) {
  require(n >= 1, ErrorKind::InvalidArgument, "hole index must be >= 1");
  const std::size_t m = a.size();
  const std::size_t target = n - 1 + m;
  std::vector<Word> out;
  std::vector<Symbol> word(a.symbols().begin(), a.symbols().end());
  if (!admissible(Word(word, base_alphabet))) return out;
  if (word.size() == target) return {Word(word, base_alphabet)};
  std::vector<Symbol> next{0};
  while (!next.empty()) {
    Symbol& choice = next.back();
    if (choice == base_alphabet) {
      next.pop_back();
      if (word.size() > m) word.pop_back();
      continue;
    }
    word.push_back(choice++);
    const Word w(word, base_alphabet);
    const std::size_t t = word.size() - m;
    if (!admissible(w) || w.occurs_at(a, t)) {
      word.pop_back();
      continue;
    }
    if (word.size() == target) {
      out.push_back(w);
      word.pop_back();
      continue;
    }
    next.push_back(0);
  }
  return out;
}

bool admissible_in(const SubshiftOfFiniteType& sft, const Word& w) {
  if (w.size() >= sft.block_length()) return sft.admits(w);
  auto [lo, hi] = sft.states_with_prefix(w);
  return lo < hi;
}

struct ComponentEigen {
  double eigenvalue;
  std::vector<double> vec;
  std::size_t iterations;
};

// Power iteration for M + sigma I restricted to one recurrent component.
// `forward` selects right (M x) or left (x M) action.
ComponentEigen component_power(const SubshiftOfFiniteType& sft,
                               const std::vector<double>& weights,
                               const std::vector<Symbol>& comp,
                               const std::vector<std::int64_t>& local,
                               bool forward, double rel_tol,
                               std::size_t max_iter) {
  const std::size_t size = comp.size();
  double max_weight = 0.0;
  for (Symbol s : comp) max_weight = std::max(max_weight, weights[s]);
  const double sigma = 0.5 * max_weight;
  std::vector<double> x(size, 1.0), y(size);
  double lo = 0.0, hi = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    if (forward) {
      for (std::size_t i = 0; i < size; ++i) {
        double acc = 0.0;
        for (Symbol t : sft.successors(comp[i]))
          if (local[t] >= 0) acc += x[static_cast<std::size_t>(local[t])];
        y[i] = weights[comp[i]] * acc + sigma * x[i];
      }
    } else {
      for (std::size_t j = 0; j < size; ++j) {
        double acc = 0.0;
        for (Symbol p : sft.predecessors(comp[j]))
          if (local[p] >= 0)
            acc += x[static_cast<std::size_t>(local[p])] * weights[p];
        y[j] = acc + sigma * x[j];
      }
    }
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double top = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      const double ratio = y[i] / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      top = std::max(top, y[i]);
    }
    for (std::size_t i = 0; i < size; ++i) x[i] = y[i] / top;
    const double rho = 0.5 * (lo + hi) - sigma;
    if (hi - lo <= rel_tol * rho) return {rho, std::move(x), it};
  }
  fail(ErrorKind::NotConverged,
       "power iteration did not converge: bracket [" + std::to_string(lo) +
           ", " + std::to_string(hi) + "]");
}

double pressure_of_weights(const SubshiftOfFiniteType& sft,
                           const std::vector<double>& weights) {
  return std::log(dominant_eigen(sft, weights).eigenvalue);
}

std::vector<double> exp_scaled(const std::vector<double>& values,
                               double factor) {
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = std::exp(factor * values[i]);
  return out;
}

}  // namespace

Potential::Potential(std::size_t level, std::size_t base_alphabet,
                     std::vector<double> values_by_code)
    : level_(level),
      base_alphabet_(base_alphabet),
      values_(std::move(values_by_code)) {
  require(level_ >= 1 && base_alphabet_ >= 1, ErrorKind::InvalidArgument,
          "potential needs level >= 1 and a nonempty alphabet");
  require(values_.size() == power(base_alphabet_, level_),
          ErrorKind::InvalidArgument,
          "potential table must have one slot per level-n word");
}

Potential Potential::constant(std::size_t base_alphabet, double value) {
  return Potential(1, base_alphabet,
                   std::vector<double>(base_alphabet, value));
}

Potential Potential::from_symbol_values(std::vector<double> values) {
  const auto k = values.size();
  return Potential(1, k, std::move(values));
}

Potential Potential::from_cylinders(
    std::size_t level, std::size_t base_alphabet,
    const std::vector<std::pair<Word, double>>& values) {
  std::vector<double> table(power(base_alphabet, level), kNaN);
  for (const auto& [w, v] : values) {
    require(w.size() == level, ErrorKind::InvalidArgument,
            "cylinder " + w.to_string() + " has the wrong level");
    table[encode(Word(std::vector<Symbol>(w.symbols().begin(),
                                          w.symbols().end()),
                      base_alphabet))] = v;
  }
  return Potential(level, base_alphabet, std::move(table));
}

double Potential::at(const Word& cylinder) const {
  require(cylinder.size() == level_, ErrorKind::InvalidArgument,
          "cylinder level does not match the potential");
  return values_.at(encode(Word(
      std::vector<Symbol>(cylinder.symbols().begin(), cylinder.symbols().end()),
      base_alphabet_)));
}

Potential Potential::scaled(double factor) const {
  auto values = values_;
  for (double& v : values) v *= factor;
  return Potential(level_, base_alphabet_, std::move(values));
}

std::vector<double> Potential::on_states(
    const SubshiftOfFiniteType& sft) const {
  require(sft.base_alphabet() == base_alphabet_, ErrorKind::InvalidArgument,
          "potential and shift use different alphabets");
  require(sft.block_length() >= level_, ErrorKind::InvalidArgument,
          "shift blocks shorter than the potential level");
  const std::uint64_t drop = power(base_alphabet_, sft.block_length() - level_);
  std::vector<double> out(sft.alphabet_size());
  for (Symbol s = 0; s < sft.alphabet_size(); ++s) {
    out[s] = values_[sft.code(s) / drop];
    require(std::isfinite(out[s]), ErrorKind::InvalidArgument,
            "potential undefined on admissible cylinder " +
                sft.block(s).prefix(level_).to_string());
  }
  return out;
}

Potential log_derivative_potential(const MarkovExpandingMap& map,
                                   std::size_t level) {
  require(level >= 1, ErrorKind::InvalidArgument, "level must be >= 1");
  const auto blocks = recode(map.shift(), level);
  std::vector<std::pair<Word, double>> values;
  for (Symbol s = 0; s < blocks.alphabet_size(); ++s) {
    const Word w = blocks.block(s);
    const double image = level == 1 ? map.branch(w[0]).image.length()
                                    : decode(map, w.slice(1, level - 1)).length();
    values.emplace_back(w, std::log(image / decode(map, w).length()));
  }
  return Potential::from_cylinders(level, map.branch_count(), values);
}

DominantEigen dominant_eigen(const SubshiftOfFiniteType& sft,
                             const std::vector<double>& weights,
                             double rel_tol, std::size_t max_iter) {
  require(weights.size() == sft.alphabet_size(), ErrorKind::InvalidArgument,
          "one weight per state required");
  const auto components = recurrent_components(sft);
  if (components.empty())
    fail(ErrorKind::EmptySurvivor, "shift has no admissible loop");
  std::vector<std::int64_t> local(sft.alphabet_size(), -1);
  DominantEigen best;
  best.eigenvalue = -1.0;
  for (const auto& comp : components) {
    for (std::size_t i = 0; i < comp.size(); ++i)
      local[comp[i]] = static_cast<std::int64_t>(i);
    auto right = component_power(sft, weights, comp, local, true, rel_tol,
                                 max_iter);
    if (right.eigenvalue > best.eigenvalue * (1 + 1e-12)) {
      auto left = component_power(sft, weights, comp, local, false, rel_tol,
                                  max_iter);
      best.eigenvalue = right.eigenvalue;
      best.iterations = right.iterations + left.iterations;
      best.component = comp;
      best.right.assign(sft.alphabet_size(), 0.0);
      best.left.assign(sft.alphabet_size(), 0.0);
      for (std::size_t i = 0; i < comp.size(); ++i) {
        best.right[comp[i]] = right.vec[i];
        best.left[comp[i]] = left.vec[i];
      }
    }
    for (Symbol s : comp) local[s] = -1;
  }
  return best;
}

EquilibriumState::EquilibriumState(
    std::shared_ptr<const SubshiftOfFiniteType> sft,
    std::vector<double> potential, DominantEigen eigen)
    : sft_(std::move(sft)),
      phi_(std::move(potential)),
      right_(std::move(eigen.right)),
      left_(std::move(eigen.left)),
      rho_(eigen.eigenvalue) {
  pressure_ = std::log(rho_);
  const std::size_t n = sft_->alphabet_size();
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += left_[i] * right_[i];
  pi_.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) pi_[i] = left_[i] * right_[i] / norm;
  prefix_mass_.assign(n + 1, 0.0);
  std::partial_sum(pi_.begin(), pi_.end(), prefix_mass_.begin() + 1);

  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  double min_left = lo, max_left = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (pi_[i] <= 0.0) continue;
    mean_potential_ += pi_[i] * phi_[i];
    for (Symbol j : sft_->successors(static_cast<Symbol>(i))) {
      const double p = transition(static_cast<Symbol>(i), j);
      if (p > 0.0) entropy_ -= pi_[i] * p * std::log(p);
    }
    const double tail = rho_ * right_[i] / std::exp(phi_[i]);
    lo = std::min(lo, tail);
    hi = std::max(hi, tail);
    min_left = std::min(min_left, left_[i]);
    max_left = std::max(max_left, left_[i]);
  }
  gibbs_constant_ =
      std::max(max_left * hi / norm, norm / (min_left * lo));
}

double EquilibriumState::transition(Symbol from, Symbol to) const {
  if (right_[from] <= 0.0 || !sft_->allows(from, to)) return 0.0;
  return std::exp(phi_[from]) * right_[to] / (rho_ * right_[from]);
}

double EquilibriumState::path_mass(std::span<const Symbol> states) const {
  if (states.empty()) return 1.0;
  double mass = pi_.at(states[0]);
  for (std::size_t i = 1; i < states.size() && mass > 0.0; ++i)
    mass *= transition(states[i - 1], states[i]);
  return mass;
}

double EquilibriumState::cylinder_mass(const Word& base) const {
  if (base.empty()) return 1.0;
  for (Symbol s : base.symbols())
    if (s >= sft_->base_alphabet()) return 0.0;
  const Word w(std::vector<Symbol>(base.symbols().begin(), base.symbols().end()),
               sft_->base_alphabet());
  if (w.size() < sft_->block_length()) {
    auto [lo, hi] = sft_->states_with_prefix(w);
    return prefix_mass_[hi] - prefix_mass_[lo];
  }
  auto path = sft_->state_path(w);
  return path ? path_mass(*path) : 0.0;
}

double EquilibriumState::integrate(const std::vector<double>& values) const {
  require(values.size() == pi_.size(), ErrorKind::InvalidArgument,
          "observable must have one value per state");
  double acc = 0.0;
  for (std::size_t i = 0; i < pi_.size(); ++i)
    if (pi_[i] > 0.0) acc += pi_[i] * values[i];
  return acc;
}

double pressure(const SubshiftOfFiniteType& sft, const Potential& phi) {
  if (phi.level() > sft.block_length())
    return pressure(recode(sft, phi.level()), phi);
  return pressure_of_weights(sft, exp_scaled(phi.on_states(sft), 1.0));
}

EquilibriumState equilibrium_state(const SubshiftOfFiniteType& sft,
                                   const Potential& phi) {
  auto shared = std::make_shared<const SubshiftOfFiniteType>(
      phi.level() > sft.block_length() ? recode(sft, phi.level()) : sft);
  auto values = phi.on_states(*shared);
  auto eigen = dominant_eigen(*shared, exp_scaled(values, 1.0));
  return EquilibriumState(std::move(shared), std::move(values),
                          std::move(eigen));
}

double bowen_root(const SubshiftOfFiniteType& sft, const Potential& psi,
                  double min_slope, double tol) {
  require(min_slope > 1.0, ErrorKind::NotExpanding,
          "Bowen root needs inf|Df| > 1");
  std::optional<SubshiftOfFiniteType> recoded;
  if (psi.level() > sft.block_length()) recoded = recode(sft, psi.level());
  const auto& shift = recoded ? *recoded : sft;
  const auto values = psi.on_states(shift);
  double lo = 0.0;
  double hi = std::log(static_cast<double>(sft.base_alphabet())) /
              std::log(min_slope);
  if (pressure_of_weights(shift, exp_scaled(values, 0.0)) <= 0.0) return 0.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (pressure_of_weights(shift, exp_scaled(values, -mid)) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

BowenDimension bowen_dimension(const MarkovExpandingMap& map,
                               std::size_t level) {
  require(map.min_slope() > 1.0, ErrorKind::NotExpanding,
          "map is not uniformly expanding");
  BowenDimension out;
  out.level = level;
  out.dimension = bowen_root(map.shift(), log_derivative_potential(map, level),
                             map.min_slope());
  const double finer =
      map.piecewise_linear()
          ? out.dimension
          : bowen_root(map.shift(), log_derivative_potential(map, level + 1),
                       map.min_slope());
  out.refinement_gap = std::abs(out.dimension - finer);
  return out;
}

double pressure_with_holes(const SubshiftOfFiniteType& sft,
                           const Potential& phi,
                           const std::vector<Word>& holes) {
  try {
    return pressure(remove_hole(sft, holes), phi);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::EmptySurvivor)
      return -std::numeric_limits<double>::infinity();
    throw;
  }
}

std::vector<Word> long_return_holes(const SubshiftOfFiniteType& sft,
                                    const Word& a, std::size_t n) {
  return avoiding_words(sft.base_alphabet(), a, n,
                        [&](const Word& w) { return admissible_in(sft, w); });
}

DecayTable hole_measure_decay(const EquilibriumState& mu, const Word& a,
                              std::size_t n_max) {
  DecayTable out;
  const std::size_t base = mu.sft().base_alphabet();
  auto alive = [&](const Word& w) { return mu.cylinder_mass(w) > 0.0; };
  for (std::size_t n = 1; n <= n_max; ++n) {
    double mass = 0.0;
    for (const auto& w : avoiding_words(base, a, n, alive))
      mass += mu.cylinder_mass(w);
    out.rows.emplace_back(n, mass);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, count = 0;
  for (auto [n, mass] : out.rows) {
    if (mass <= 0.0) continue;
    const double x = static_cast<double>(n), y = std::log(mass);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2)
    out.log_rate = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return out;
}

std::vector<BoundaryStep> boundary_removal_schedule(
    const MarkovExpandingMap& map, std::size_t n_max,
    std::optional<std::vector<EventuallyPeriodic>> boundary,
    std::size_t level) {
  const auto& k_set = boundary ? *boundary : map.boundary();
  const auto psi = log_derivative_potential(map, level);
  std::vector<BoundaryStep> out;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::set<Word> holes;
    for (const auto& seq : k_set) {
      const std::size_t starts = seq.prefix.size() + seq.cycle.size();
      const Word long_word = seq.expand(starts + n);
      for (std::size_t i = 0; i < starts; ++i)
        holes.insert(long_word.slice(i, n));
    }
    BoundaryStep step;
    step.n = n;
    step.hole_count = holes.size();
    try {
      auto survivor =
          remove_hole(map.shift(), std::vector<Word>(holes.begin(), holes.end()));
      step.dimension = bowen_root(survivor, psi, map.min_slope());
      step.survivor = std::move(survivor);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptySurvivor) throw;
    }
    out.push_back(std::move(step));
  }
  return out;
}

KacReport kac_check(const EquilibriumState& nu, const Word& a,
                    std::size_t t_max) {
  KacReport out;
  out.cylinder_mass = nu.cylinder_mass(a);
  if (out.cylinder_mass < 1e-300)
    fail(ErrorKind::ZeroMassCylinder,
         "cylinder " + a.to_string() + " has zero mass");
  const std::size_t base = nu.sft().base_alphabet();
  std::vector<double> level_mass(t_max, 0.0);
  auto alive = [&](const Word& w) { return nu.cylinder_mass(w) > 0.0; };
  for_each_return_word(base, a, t_max, alive,
                       [&](const Word& z, std::size_t t) {
                         level_mass[t] += nu.cylinder_mass(z.concat(a)) /
                                          out.cylinder_mass;
                       });
  double covered = 0.0;
  for (std::size_t t = 1; t < t_max; ++t) {
    out.mean_return += static_cast<double>(t) * level_mass[t];
    covered += level_mass[t];
  }
  out.product = out.cylinder_mass * out.mean_return;
  out.tail_mass = std::max(0.0, 1.0 - covered);
  const double last = t_max >= 2 ? level_mass[t_max - 1] : 0.0;
  const double prev = t_max >= 3 ? level_mass[t_max - 2] : 0.0;
  if (last > 0.0 && prev > 0.0 && last < prev) {
    const double q = last / prev;
    const double T = static_cast<double>(t_max);
    out.tail_bound = out.cylinder_mass * last * q *
                     (T / (1.0 - q) + q / ((1.0 - q) * (1.0 - q)));
  } else {
    out.tail_bound = out.cylinder_mass * out.tail_mass *
                     static_cast<double>(t_max);
  }
  return out;
}

}  // namespace recur
