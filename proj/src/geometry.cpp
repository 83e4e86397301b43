#include "recur/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "recur/error.hpp"

namespace recur {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kSnap = 1e-12;

SubshiftOfFiniteType coding_shift(const std::vector<Branch>& branches) {
  std::vector<SubshiftOfFiniteType::Edge> edges;
  for (Symbol i = 0; i < branches.size(); ++i) {
    for (Symbol j = 0; j < branches.size(); ++j) {
      const auto& img = branches[i].image;
      const auto& dom = branches[j].domain;
      if (img.lo <= dom.lo + kSnap && dom.hi <= img.hi + kSnap)
        edges.emplace_back(i, j);
    }
  }
  return SubshiftOfFiniteType::from_edges(branches.size(), std::move(edges));
}

}  // namespace

double BranchShape::value(double u) const {
  return u + epsilon * std::sin(kTwoPi * u) / kTwoPi;
}

double BranchShape::derivative(double u) const {
  return 1.0 + epsilon * std::cos(kTwoPi * u);
}

double BranchShape::inverse(double v) const {
  if (linear()) return v;
  double lo = 0.0, hi = 1.0, u = v;
  for (int it = 0; it < 100; ++it) {
    const double f = value(u) - v;
    if (f > 0) hi = u; else lo = u;
    double next = u - f / derivative(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-17) return next;
    u = next;
  }
  return u;
}

double BranchShape::min_derivative() const { return 1.0 - std::abs(epsilon); }
double BranchShape::max_derivative() const { return 1.0 + std::abs(epsilon); }

double Branch::apply(double x) const {
  const double v = shape.value((x - domain.lo) / domain.length());
  return increasing ? image.lo + v * image.length()
                    : image.hi - v * image.length();
}

double Branch::derivative(double x) const {
  const double slope = image.length() / domain.length() *
                       shape.derivative((x - domain.lo) / domain.length());
  return increasing ? slope : -slope;
}

double Branch::inverse(double y) const {
  double v = increasing ? (y - image.lo) / image.length()
                        : (image.hi - y) / image.length();
  v = std::clamp(v, 0.0, 1.0);
  return domain.lo + shape.inverse(v) * domain.length();
}

Word EventuallyPeriodic::expand(std::size_t length) const {
  std::vector<Symbol> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(i < prefix.size()
                      ? prefix[i]
                      : cycle[(i - prefix.size()) % cycle.size()]);
  }
  return Word(std::move(out), std::max(prefix.alphabet_size(),
                                       cycle.alphabet_size()));
}

MarkovExpandingMap::MarkovExpandingMap(
    std::string name, std::vector<Branch> branches,
    std::optional<std::vector<EventuallyPeriodic>> boundary)
    : name_(std::move(name)),
      branches_(std::move(branches)),
      shift_(coding_shift(branches_)) {
  require(!branches_.empty(), ErrorKind::ConfigError, "map has no branches");
  double lo = 1.0, hi = 0.0;
  std::set<double> ends;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const auto& b = branches_[i];
    require(b.domain.length() > 0 && b.image.length() > 0,
            ErrorKind::ConfigError, "branch intervals must be nondegenerate");
    require(std::abs(b.shape.epsilon) < 1.0, ErrorKind::ConfigError,
            "shape parameter must satisfy |epsilon| < 1");
    if (i > 0)
      require(branches_[i - 1].domain.hi <= b.domain.lo + kSnap,
              ErrorKind::ConfigError,
              "branch domains must be sorted and disjoint");
    lo = std::min(lo, b.domain.lo);
    hi = std::max(hi, b.domain.hi);
    ends.insert(b.domain.lo);
    ends.insert(b.domain.hi);
  }
  require(std::abs(lo) < kSnap && std::abs(hi - 1.0) < kSnap,
          ErrorKind::ConfigError, "branch domains must span [0,1]");
  auto is_end = [&](double v) {
    for (double e : ends)
      if (std::abs(e - v) < 1e-9) return true;
    return false;
  };
  min_slope_ = std::numeric_limits<double>::infinity();
  max_slope_ = 0.0;
  for (const auto& b : branches_) {
    require(is_end(b.image.lo) && is_end(b.image.hi), ErrorKind::ConfigError,
            "branch image endpoints must be partition endpoints (Markov)");
    const double scale = b.image.length() / b.domain.length();
    min_slope_ = std::min(min_slope_, scale * b.shape.min_derivative());
    max_slope_ = std::max(max_slope_, scale * b.shape.max_derivative());
    piecewise_linear_ = piecewise_linear_ && b.shape.linear();
  }
  require(min_slope_ > 1.0, ErrorKind::NotExpanding,
          "map is not uniformly expanding: inf|Df| = " +
              std::to_string(min_slope_));
  boundary_ = boundary ? std::move(*boundary) : derive_boundary();
}

std::vector<EventuallyPeriodic> MarkovExpandingMap::derive_boundary() const {
  // Nodes are (endpoint, branch) pairs; following f from a node lands on
  // another endpoint, and every branch containing it is a successor.
  std::vector<double> points;
  for (const auto& b : branches_) {
    points.push_back(b.domain.lo);
    points.push_back(b.domain.hi);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end(),
                           [](double a, double b) {
                             return std::abs(a - b) < 1e-9;
                           }),
               points.end());
  auto point_index = [&](double v) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (std::abs(points[i] - v) < 1e-9) return i;
    return std::nullopt;
  };
  struct Node {
    std::size_t point;
    Symbol branch;
  };
  std::vector<Node> nodes;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (Symbol i = 0; i < branches_.size(); ++i)
      if (branches_[i].domain.contains(points[p])) nodes.push_back({p, i});
  std::vector<std::vector<std::size_t>> next(nodes.size());
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    auto image = point_index(
        branches_[nodes[v].branch].apply(points[nodes[v].point]));
    if (!image) continue;
    for (std::size_t w = 0; w < nodes.size(); ++w)
      if (nodes[w].point == *image) next[v].push_back(w);
  }

  const std::size_t k = branches_.size();
  std::set<std::pair<std::vector<Symbol>, std::vector<Symbol>>> found;
  std::vector<std::size_t> path;
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    if (found.size() > 256) return;
    auto seen = std::find(path.begin(), path.end(), v);
    if (seen != path.end()) {
      std::vector<Symbol> prefix, cycle;
      for (auto it = path.begin(); it != seen; ++it)
        prefix.push_back(nodes[*it].branch);
      for (auto it = seen; it != path.end(); ++it)
        cycle.push_back(nodes[*it].branch);
      found.emplace(prefix, cycle);
      return;
    }
    path.push_back(v);
    for (std::size_t w : next[v]) self(self, w);
    path.pop_back();
  };
  for (std::size_t v = 0; v < nodes.size(); ++v) dfs(dfs, v);
  std::vector<EventuallyPeriodic> out;
  for (const auto& [p, c] : found) out.push_back({Word(p, k), Word(c, k)});
  return out;
}

MarkovExpandingMap MarkovExpandingMap::linear_full(
    std::string name, std::vector<Interval> domains) {
  std::vector<Branch> branches;
  for (const auto& d : domains) branches.push_back({d, {0.0, 1.0}, true, {}});
  return MarkovExpandingMap(std::move(name), std::move(branches));
}

MarkovExpandingMap MarkovExpandingMap::doubling() {
  return linear_full("doubling", {{0.0, 0.5}, {0.5, 1.0}});
}

MarkovExpandingMap MarkovExpandingMap::cantor3() {
  return linear_full("cantor3", {{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}});
}

MarkovExpandingMap MarkovExpandingMap::slopes24() {
  return linear_full("slopes24", {{0.0, 0.5}, {0.75, 1.0}});
}

MarkovExpandingMap MarkovExpandingMap::golden() {
  const double g = std::numbers::phi;
  return MarkovExpandingMap(
      "golden", {{{0.0, 1.0 / g}, {0.0, 1.0}, true, {}},
                 {{1.0 / g, 1.0}, {0.0, 1.0 / g}, true, {}}});
}

MarkovExpandingMap MarkovExpandingMap::sine_doubling(double epsilon) {
  return MarkovExpandingMap(
      "sine-doubling",
      {{{0.0, 0.5}, {0.0, 1.0}, true, {epsilon}},
       {{0.5, 1.0}, {0.0, 1.0}, true, {epsilon}}});
}

std::size_t MarkovExpandingMap::branch_of(double x) const {
  std::optional<std::size_t> hit;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    if (!branches_[i].domain.contains(x)) continue;
    if (hit)
      fail(ErrorKind::BoundaryOrbit,
           "point " + std::to_string(x) + " lies on a partition boundary");
    hit = i;
  }
  require(hit.has_value(), ErrorKind::InvalidArgument,
          "point " + std::to_string(x) + " lies outside every branch domain");
  return *hit;
}

double MarkovExpandingMap::apply(double x) const {
  return branches_[branch_of(x)].apply(x);
}

double MarkovExpandingMap::derivative(double x) const {
  return branches_[branch_of(x)].derivative(x);
}

Word code(const MarkovExpandingMap& map, double x, std::size_t depth) {
  std::vector<Symbol> out;
  out.reserve(depth);
  for (std::size_t i = 0; i < depth; ++i) {
    const auto b = map.branch_of(x);
    out.push_back(static_cast<Symbol>(b));
    x = map.branch(b).apply(x);
  }
  return Word(std::move(out), map.branch_count());
}

Interval decode(const MarkovExpandingMap& map, const Word& w) {
  if (w.empty()) return {0.0, 1.0};
  for (Symbol s : w.symbols())
    require(s < map.branch_count(), ErrorKind::InadmissibleWord,
            "symbol outside the map's alphabet");
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    require(map.shift().allows(w[i], w[i + 1]), ErrorKind::InadmissibleWord,
            "word " + w.to_string() + " is not admissible");
  Interval out = map.branch(w[w.size() - 1]).domain;
  for (std::size_t i = w.size() - 1; i-- > 0;) {
    const auto& b = map.branch(w[i]);
    double a = b.inverse(out.lo), c = b.inverse(out.hi);
    out = {std::min(a, c), std::max(a, c)};
  }
  return out;
}

std::size_t decode_tail(const MarkovExpandingMap& map) {
  return static_cast<std::size_t>(
             std::ceil(60.0 * std::log(2.0) / std::log(map.min_slope()))) +
         2;
}

std::vector<double> orbit_from_word(const MarkovExpandingMap& map,
                                    const Word& w, std::size_t count) {
  const std::size_t tail = decode_tail(map);
  require(count >= 1, ErrorKind::InvalidArgument, "empty orbit requested");
  require(w.size() >= count - 1 + tail, ErrorKind::HorizonTooShort,
          "coding word too short for the requested orbit length");
  for (std::size_t i = 0; i + 1 < count; ++i)
    require(map.shift().allows(w[i], w[i + 1]), ErrorKind::InadmissibleWord,
            "coding word is not admissible");
  std::vector<double> orbit(count);
  orbit[count - 1] = decode(map, w.slice(count - 1, tail)).midpoint();
  for (std::size_t n = count - 1; n-- > 0;)
    orbit[n] = map.branch(w[n]).inverse(orbit[n + 1]);
  return orbit;
}

double point_of_word(const MarkovExpandingMap& map, const Word& w) {
  const std::size_t tail = decode_tail(map);
  if (w.size() >= tail) return decode(map, w.prefix(tail)).midpoint();
  return decode(map, w).midpoint();
}

ReturnTime tau_r(const MarkovExpandingMap& map, double x, double r,
                 std::size_t n_max) {
  double y = x;
  for (std::size_t n = 1; n <= n_max; ++n) {
    y = map.apply(y);
    if (std::abs(y - x) < r) return n;
  }
  return Censored{n_max};
}

std::vector<ReturnTime> return_times(std::span<const double> orbit,
                                     std::span<const double> radii) {
  std::vector<std::size_t> order(radii.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
  const std::size_t horizon = orbit.empty() ? 0 : orbit.size() - 1;
  std::vector<ReturnTime> out(radii.size(), Censored{horizon});
  std::size_t next = 0;
  for (std::size_t n = 1; n < orbit.size() && next < order.size(); ++n) {
    const double d = std::abs(orbit[n] - orbit[0]);
    while (next < order.size() && radii[order[next]] > d) out[order[next++]] = n;
  }
  return out;
}

double birkhoff_sum(const MarkovExpandingMap& map, double x, std::size_t k) {
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const auto b = map.branch_of(x);
    sum += std::log(std::abs(map.branch(b).derivative(x)));
    x = map.branch(b).apply(x);
  }
  return sum;
}

double birkhoff_sum(const MarkovExpandingMap& map, const Word& w,
                    std::size_t k) {
  require(k <= w.size(), ErrorKind::InvalidArgument,
          "word shorter than the Birkhoff horizon");
  if (k == 0) return 0.0;
  if (map.piecewise_linear()) {
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto& b = map.branch(w[j]);
      sum += std::log(b.image.length() / b.domain.length());
    }
    return sum;
  }
  const auto orbit = orbit_from_word(map, w, k);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j)
    sum += std::log(std::abs(map.branch(w[j]).derivative(orbit[j])));
  return sum;
}

DistortionData distortion_constants(const MarkovExpandingMap& map,
                                    std::size_t probe_depth) {
  require(probe_depth >= 1, ErrorKind::InvalidArgument,
          "probe depth must be >= 1");
  DistortionData out;
  out.probe_depth = probe_depth;
  if (!map.piecewise_linear()) {
    std::mt19937_64 rng(0x5eedULL);
    const auto& sft = map.shift();
    constexpr std::size_t kSamples = 2048;
    for (std::size_t n = 1; n <= probe_depth; ++n) {
      for (std::size_t trial = 0; trial < kSamples; ++trial) {
        // Random admissible n-word.
        std::vector<Symbol> w{static_cast<Symbol>(rng() % sft.alphabet_size())};
        while (w.size() < n) {
          auto succ = sft.successors(w.back());
          w.push_back(succ[rng() % succ.size()]);
        }
        const Word word(w, map.branch_count());
        const Interval cyl = decode(map, word);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (int j = 0; j <= 8; ++j) {
          double x = cyl.lo + cyl.length() * j / 8.0;
          double log_deriv = 0.0;
          for (std::size_t i = 0; i < n; ++i) {
            const auto& b = map.branch(w[i]);
            log_deriv += std::log(std::abs(b.derivative(x)));
            x = std::clamp(b.apply(x), 0.0, 1.0);
          }
          lo = std::min(lo, log_deriv);
          hi = std::max(hi, log_deriv);
        }
        out.distortion = std::max(out.distortion, std::exp(hi - lo));
      }
    }
  }
  out.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < map.branch_count(); ++i)
    out.delta = std::min(out.delta, std::max(0.0, map.branch(i + 1).domain.lo -
                                                      map.branch(i).domain.hi));
  if (map.branch_count() == 1) out.delta = 1.0;
  if (out.delta <= 0.0) {
    out.full_branch_adjacent = true;
    double shortest = 1.0;
    const auto& sft = map.shift();
    for (Symbol a = 0; a < sft.alphabet_size(); ++a)
      for (Symbol b : sft.successors(a))
        shortest = std::min(shortest,
                            decode(map, Word({a, b}, map.branch_count()))
                                .length());
    out.kappa = 0.5 * shortest;
  } else {
    out.kappa = std::min(out.delta / out.distortion, 0.999);
  }
  return out;
}

BallCylinderReport ball_cylinder_sandwich_check(const MarkovExpandingMap& map,
                                                const DistortionData& dd,
                                                const Word& x_word,
                                                std::size_t n) {
  require(n >= 1, ErrorKind::InvalidArgument, "cylinder level must be >= 1");
  require(x_word.size() >= n, ErrorKind::HorizonTooShort,
          "coding word shorter than the cylinder level");
  BallCylinderReport r;
  r.x = point_of_word(map, x_word);
  r.cylinder = decode(map, x_word.prefix(n));
  const double expansion = std::exp(birkhoff_sum(map, x_word, n));
  r.inner_radius = dd.kappa / expansion;
  r.outer_radius = 1.0 / (dd.kappa * expansion);

  // Nearest repeller points outside the cylinder sit at the ends of the
  // sibling cylinders along the coding path.
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  const auto& sft = map.shift();
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Symbol> sibling(x_word.symbols().begin(),
                                x_word.symbols().begin() +
                                    static_cast<std::ptrdiff_t>(j + 1));
    for (Symbol s = 0; s < map.branch_count(); ++s) {
      if (s == x_word[j]) continue;
      if (j > 0 && !sft.allows(x_word[j - 1], s)) continue;
      sibling.back() = s;
      const Interval other = decode(map, Word(sibling, map.branch_count()));
      if (other.hi <= r.cylinder.lo) left = std::max(left, other.hi);
      if (other.lo >= r.cylinder.hi) right = std::min(right, other.lo);
    }
  }
  r.gap_to_outside = std::min(r.x - left, right - r.x);
  r.reach = std::max(r.x - r.cylinder.lo, r.cylinder.hi - r.x);
  r.inner_holds = r.gap_to_outside >= r.inner_radius;
  r.outer_holds = r.reach < r.outer_radius;
  return r;
}

RecurrenceSandwichReport recurrence_sandwich_check(
    const MarkovExpandingMap& map, const DistortionData& dd,
    const Word& x_word, std::size_t k) {
  RecurrenceSandwichReport r;
  r.k = k;
  auto rep = repetition_time(x_word, k);
  if (!rep)
    fail(ErrorKind::Censored, "no k-repetition inside the coding horizon");
  r.repetition = *rep;
  r.birkhoff = birkhoff_sum(map, x_word, k);
  r.small_radius = dd.kappa * std::exp(-r.birkhoff);
  r.large_radius = std::exp(-r.birkhoff) / dd.kappa;
  const std::size_t tail = decode_tail(map);
  require(x_word.size() > tail + r.repetition, ErrorKind::Censored,
          "coding word too short to follow the orbit past R_k");
  const auto orbit = orbit_from_word(map, x_word, x_word.size() - tail + 1);
  const double radii[] = {r.small_radius, r.large_radius};
  const auto taus = return_times(orbit, radii);
  r.tau_small = taus[0];
  r.tau_large = taus[1];
  const bool left_ok =
      censored(r.tau_small) || value_of(r.tau_small) >= r.repetition;
  const bool right_ok =
      !censored(r.tau_large) && value_of(r.tau_large) <= r.repetition;
  r.holds = left_ok && right_ok;
  return r;
}

}  // namespace recur
