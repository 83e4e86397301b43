#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "recur/geometry.hpp"
#include "recur/symbolic.hpp"

namespace recur {

/// Locally constant potential: one value per admissible cylinder of a fixed
/// level over a base alphabet.  Values are stored densely by block code;
/// entries for inadmissible cylinders are NaN.
class Potential {
 public:
  Potential(std::size_t level, std::size_t base_alphabet,
            std::vector<double> values_by_code);

  static Potential constant(std::size_t base_alphabet, double value);
  static Potential from_symbol_values(std::vector<double> values);
  /// One value per cylinder word, everything else NaN.
  static Potential from_cylinders(
      std::size_t level, std::size_t base_alphabet,
      const std::vector<std::pair<Word, double>>& values);

  std::size_t level() const noexcept { return level_; }
  std::size_t base_alphabet() const noexcept { return base_alphabet_; }
  double at_code(std::uint64_t code) const { return values_.at(code); }
  double at(const Word& cylinder) const;
  Potential scaled(double factor) const;

  /// Value on every state of `sft`, read from each block's prefix.
  /// Requires sft.block_length() >= level().
  std::vector<double> on_states(const SubshiftOfFiniteType& sft) const;

 private:
  std::size_t level_;
  std::size_t base_alphabet_;
  std::vector<double> values_;
};

/// psi = log|Df| made locally constant on level-n cylinders by the
/// mean-value slope |f(Z)| / |Z|.  Exact for piecewise-linear maps.
Potential log_derivative_potential(const MarkovExpandingMap& map,
                                   std::size_t level);

struct DominantEigen {
  double eigenvalue = 0.0;
  std::vector<double> right;  // zero outside the component
  std::vector<double> left;
  std::vector<Symbol> component;
  std::size_t iterations = 0;
};

/// Dominant eigendata of M[i][j] = weight[i] * [i -> j] on the recurrent
/// component of largest spectral radius.  Power iteration, stopped on the
/// Collatz-Wielandt bracket.
DominantEigen dominant_eigen(const SubshiftOfFiniteType& sft,
                             const std::vector<double>& weights,
                             double rel_tol = 1e-13,
                             std::size_t max_iter = 100000);

/// Gibbs equilibrium state of a locally constant potential, stored as the
/// stationary Markov chain P[i][j] = w_i r_j / (rho r_i) on the states of a
/// block presentation.
class EquilibriumState {
 public:
  EquilibriumState(std::shared_ptr<const SubshiftOfFiniteType> sft,
                   std::vector<double> potential, DominantEigen eigen);

  double pressure() const noexcept { return pressure_; }
  double entropy() const noexcept { return entropy_; }
  double mean_potential() const noexcept { return mean_potential_; }
  /// Gibbs constant c0 with 1/c0 <= mu(Z) exp(kP - phi_k) <= c0.
  double gibbs_constant() const noexcept { return gibbs_constant_; }

  const SubshiftOfFiniteType& sft() const noexcept { return *sft_; }
  std::shared_ptr<const SubshiftOfFiniteType> sft_ptr() const { return sft_; }
  const std::vector<double>& right() const noexcept { return right_; }
  const std::vector<double>& left() const noexcept { return left_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }
  const std::vector<double>& potential() const noexcept { return phi_; }

  double transition(Symbol from, Symbol to) const;
  /// Measure of the cylinder of a base word.
  double cylinder_mass(const Word& base) const;
  /// Measure of a cylinder given as a path of states.
  double path_mass(std::span<const Symbol> states) const;
  /// Integral of a per-state observable.
  double integrate(const std::vector<double>& per_state) const;

 private:
  std::shared_ptr<const SubshiftOfFiniteType> sft_;
  std::vector<double> phi_;
  std::vector<double> right_, left_, pi_;
  std::vector<double> prefix_mass_;  // cumulative pi in state order
  double pressure_ = 0.0;
  double rho_ = 0.0;
  double entropy_ = 0.0;
  double mean_potential_ = 0.0;
  double gibbs_constant_ = 1.0;
};

double pressure(const SubshiftOfFiniteType& sft, const Potential& phi);
EquilibriumState equilibrium_state(const SubshiftOfFiniteType& sft,
                                   const Potential& phi);

struct BowenDimension {
  double dimension = 0.0;
  std::size_t level = 1;
  double refinement_gap = 0.0;  // |s_level - s_{level+1}|
};

/// Root s of P(-s psi_level) = 0 on the coding shift, by bisection.
double bowen_root(const SubshiftOfFiniteType& sft, const Potential& psi,
                  double min_slope, double tol = 1e-13);
BowenDimension bowen_dimension(const MarkovExpandingMap& map,
                               std::size_t level = 1);

/// Pressure on the survivor set of the holes; -infinity if nothing survives.
double pressure_with_holes(const SubshiftOfFiniteType& sft,
                           const Potential& phi,
                           const std::vector<Word>& holes);

/// H_n = {w in A : t(w) >= n} as cylinders of length n - 1 + |A|.
std::vector<Word> long_return_holes(const SubshiftOfFiniteType& sft,
                                    const Word& a, std::size_t n);

struct DecayTable {
  std::vector<std::pair<std::size_t, double>> rows;  // (n, mu(H_n))
  double log_rate = 0.0;  // fitted slope of log mu(H_n) against n
};

DecayTable hole_measure_decay(const EquilibriumState& mu, const Word& a,
                              std::size_t n_max);

struct BoundaryStep {
  std::size_t n = 0;
  std::optional<SubshiftOfFiniteType> survivor;  // empty on EmptySurvivor
  double dimension = 0.0;
  std::size_t hole_count = 0;
};

/// Sub-shifts avoiding the n-cylinders around the coded boundary set K,
/// with their Bowen dimensions.  `boundary` defaults to map.boundary().
std::vector<BoundaryStep> boundary_removal_schedule(
    const MarkovExpandingMap& map, std::size_t n_max,
    std::optional<std::vector<EventuallyPeriodic>> boundary = std::nullopt,
    std::size_t level = 1);

struct KacReport {
  double cylinder_mass = 0.0;   // nu(A)
  double mean_return = 0.0;     // nu-hat(t), truncated at t_max
  double product = 0.0;         // nu(A) * nu-hat(t)
  double tail_mass = 0.0;       // nu{t >= t_max} / nu(A)
  double tail_bound = 0.0;      // bound on the missing part of the product
};

KacReport kac_check(const EquilibriumState& nu, const Word& a,
                    std::size_t t_max);

}  // namespace recur
