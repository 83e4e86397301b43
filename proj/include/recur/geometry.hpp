#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "recur/symbolic.hpp"
#include "recur/word.hpp"

namespace recur {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const noexcept {
    return lo <= o.lo && o.hi <= hi;
  }
};

/// Increasing homeomorphism of [0,1] used to shape a branch.  `epsilon`
/// zero is the identity; otherwise u + epsilon*sin(2 pi u)/(2 pi), whose
/// derivative 1 + epsilon*cos(2 pi u) stays in [1-|eps|, 1+|eps|].
struct BranchShape {
  double epsilon = 0.0;

  double value(double u) const;
  double derivative(double u) const;
  double inverse(double v) const;
  double min_derivative() const;
  double max_derivative() const;
  bool linear() const noexcept { return epsilon == 0.0; }
};

struct Branch {
  Interval domain;
  Interval image;
  bool increasing = true;
  BranchShape shape;

  double apply(double x) const;
  double derivative(double x) const;  // signed
  double inverse(double y) const;     // y in image
};

/// An eventually periodic sequence prefix.cycle.cycle...
struct EventuallyPeriodic {
  Word prefix;
  Word cycle;

  Word expand(std::size_t length) const;
  friend bool operator==(const EventuallyPeriodic&,
                         const EventuallyPeriodic&) = default;
};

/// Piecewise expanding Markov map of [0,1]; the branch domains are the
/// Markov partition and the coding shift has i -> j whenever domain j lies
/// in image i.
class MarkovExpandingMap {
 public:
  MarkovExpandingMap(std::string name, std::vector<Branch> branches,
                     std::optional<std::vector<EventuallyPeriodic>> boundary =
                         std::nullopt);

  static MarkovExpandingMap doubling();
  /// Two linear branches of slope 3 on [0,1/3] and [2/3,1].
  static MarkovExpandingMap cantor3();
  /// Linear branches on [0,1/2] (slope 2) and [3/4,1] (slope 4).
  static MarkovExpandingMap slopes24();
  /// x -> phi x on [0,1/phi], x -> phi x - 1 on [1/phi,1]; golden-mean coded.
  static MarkovExpandingMap golden();
  /// Doubling map with both branches shaped by u + eps sin(2 pi u)/(2 pi).
  static MarkovExpandingMap sine_doubling(double epsilon);
  /// Full linear branches onto [0,1] over the given disjoint domains.
  static MarkovExpandingMap linear_full(std::string name,
                                        std::vector<Interval> domains);

  const std::string& name() const noexcept { return name_; }
  std::size_t branch_count() const noexcept { return branches_.size(); }
  const Branch& branch(std::size_t i) const { return branches_.at(i); }
  const SubshiftOfFiniteType& shift() const noexcept { return shift_; }
  double min_slope() const noexcept { return min_slope_; }
  double max_slope() const noexcept { return max_slope_; }
  bool piecewise_linear() const noexcept { return piecewise_linear_; }
  /// Coding of the forward-invariant boundary set K.
  const std::vector<EventuallyPeriodic>& boundary() const noexcept {
    return boundary_;
  }

  /// Index of the unique closed branch domain containing x.  Throws
  /// BoundaryOrbit on a shared endpoint and InvalidArgument when x lies in
  /// no domain.
  std::size_t branch_of(double x) const;
  double apply(double x) const;
  double derivative(double x) const;

 private:
  std::vector<EventuallyPeriodic> derive_boundary() const;

  std::string name_;
  std::vector<Branch> branches_;
  SubshiftOfFiniteType shift_;
  std::vector<EventuallyPeriodic> boundary_;
  double min_slope_ = 0.0;
  double max_slope_ = 0.0;
  bool piecewise_linear_ = true;
};

Word code(const MarkovExpandingMap& map, double x, std::size_t depth);
Interval decode(const MarkovExpandingMap& map, const Word& w);

/// Symbols needed after position n so that decoding pins f^n x to double
/// precision.
std::size_t decode_tail(const MarkovExpandingMap& map);

/// Orbit x_0 .. x_{count-1} of the point coded by `w`, computed backwards
/// through inverse branches (a contraction, so errors do not grow).
/// Requires |w| >= count + decode_tail(map).
std::vector<double> orbit_from_word(const MarkovExpandingMap& map,
                                    const Word& w, std::size_t count);
double point_of_word(const MarkovExpandingMap& map, const Word& w);

struct Censored {
  std::size_t horizon;
  friend bool operator==(const Censored&, const Censored&) = default;
};
using ReturnTime = std::variant<std::size_t, Censored>;

inline bool censored(const ReturnTime& t) {
  return std::holds_alternative<Censored>(t);
}
inline std::size_t value_of(const ReturnTime& t) {
  return std::get<std::size_t>(t);
}

/// First n <= n_max with |f^n x - x| < r by forward floating iteration.
ReturnTime tau_r(const MarkovExpandingMap& map, double x, double r,
                 std::size_t n_max);
/// tau_r for each radius along an orbit x_0, x_1, ... (x_0 the base point).
std::vector<ReturnTime> return_times(std::span<const double> orbit,
                                     std::span<const double> radii);

/// Sum of log|Df| along the first k iterates.
double birkhoff_sum(const MarkovExpandingMap& map, double x, std::size_t k);
double birkhoff_sum(const MarkovExpandingMap& map, const Word& w,
                    std::size_t k);

struct DistortionData {
  double distortion = 1.0;  // D
  double delta = 0.0;       // minimal gap between level-1 cylinder images
  double kappa = 0.0;
  bool full_branch_adjacent = false;
  std::size_t probe_depth = 0;
};

DistortionData distortion_constants(const MarkovExpandingMap& map,
                                    std::size_t probe_depth);

struct BallCylinderReport {
  Interval cylinder;
  double x = 0.0;
  double inner_radius = 0.0;  // kappa / |D_x f^n|
  double outer_radius = 0.0;  // 1 / (kappa |D_x f^n|)
  double gap_to_outside = 0.0;  // distance from x to repeller points outside
  double reach = 0.0;           // max distance from x to the cylinder ends
  bool inner_holds = false;
  bool outer_holds = false;
  bool holds() const noexcept { return inner_holds && outer_holds; }
};

BallCylinderReport ball_cylinder_sandwich_check(const MarkovExpandingMap& map,
                                                const DistortionData& dd,
                                                const Word& x_word,
                                                std::size_t n);

struct RecurrenceSandwichReport {
  std::size_t k = 0;
  double birkhoff = 0.0;  // S_k psi
  double small_radius = 0.0;
  double large_radius = 0.0;
  ReturnTime tau_small = Censored{0};
  std::size_t repetition = 0;
  ReturnTime tau_large = Censored{0};
  bool holds = false;
};

/// Checks tau_{kappa e^{-S_k psi}} >= R_k >= tau_{e^{-S_k psi}/kappa}.
RecurrenceSandwichReport recurrence_sandwich_check(
    const MarkovExpandingMap& map, const DistortionData& dd,
    const Word& x_word, std::size_t k);

}  // namespace recur
