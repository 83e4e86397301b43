#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "recur/geometry.hpp"
#include "recur/insertion.hpp"
#include "recur/symbolic.hpp"
#include "recur/thermo.hpp"

namespace recur {

/// splitmix64(splitmix64(master) + index): per-task seeds for parallel runs.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Draws paths of the stationary Markov chain behind an equilibrium state.
class ChainSampler {
 public:
  explicit ChainSampler(const EquilibriumState& mu);

  /// Base word of `length` symbols.  With `prefix`, the chain starts in a
  /// state whose block begins with it (the prefix must fit in one block).
  Word sample(std::size_t length, std::uint64_t seed,
              const Word* prefix = nullptr) const;

 private:
  std::shared_ptr<const SubshiftOfFiniteType> sft_;
  std::vector<double> pi_;
  std::vector<std::size_t> offsets_;
  std::vector<double> cumulative_;  // per state, over its successors
  std::vector<Symbol> first_symbol_;
};

/// The source of large dimension at return bound n: the survivor shift
/// Sigma_n without the long-return holes, with the equilibrium state of
/// phi = -s psi there (s the Bowen dimension of the map).
struct SourceConfig {
  std::size_t n = 0;
  ConnectingPaths paths;  // A = paths.a
  std::size_t hole_count = 0;
  double dimension = 0.0;  // s
  Potential psi = Potential::constant(1, 0.0);
  std::shared_ptr<const EquilibriumState> nu;
  double pressure_gap = 0.0;      // P(phi | Sigma_n)
  double lambda = 0.0;            // integral of psi
  double entropy = 0.0;
  double source_dimension = 0.0;  // entropy / lambda
  double mass_a = 0.0;            // nu_n(A)
  double mean_return = 0.0;       // nu-hat_n(t)
  double birkhoff_tolerance = 0.0;
  ReturnAlphabet alphabet;        // letters with t < n

  const Word& a() const noexcept { return paths.a; }
};

/// `cylinder` overrides the base cylinder A found by connecting paths.
SourceConfig build_source(const MarkovExpandingMap& map, std::size_t n,
                          double birkhoff_tolerance = 0.05,
                          std::size_t psi_level = 1,
                          const std::optional<Word>& cylinder = std::nullopt);

struct SourceSample {
  Word base;                   // starts with A and ends on an A occurrence
  std::vector<Symbol> letters;  // induced letters, indices into alphabet
  double psi_average = 0.0;     // (1/N) S_N psi along base
  double return_average = 0.0;  // mean induced return time
  std::size_t attempts = 0;
};

/// Induced word of `letters` letters drawn from nu_n conditioned on A, whose
/// Birkhoff averages of psi and t both sit within the tolerance.  With
/// `prefix_from` > 0 every prefix of k >= prefix_from letters must also have
/// mean return time within the tolerance, relative to nu-hat_n(t).
SourceSample sample_source_point(const MarkovExpandingMap& map,
                                 const SourceConfig& source,
                                 std::size_t letters, std::uint64_t seed,
                                 std::size_t max_attempts = 20,
                                 std::size_t prefix_from = 0);

/// (scale, ratio) samples and their tail-window extremes.
struct RecurrenceEstimate {
  std::vector<std::pair<double, double>> samples;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t window_from = 0;  // sample indices, inclusive
  std::size_t window_to = 0;
  std::string policy;
  std::size_t censored = 0;
};

/// Fills lower/upper from samples[from..to].
void summarize_window(RecurrenceEstimate& est, std::size_t from,
                      std::size_t to, std::string policy);
/// Last half of the samples.
void summarize_tail(RecurrenceEstimate& est);

/// Geometric route: log tau_r / (-log r) for each radius along an orbit.
RecurrenceEstimate geometric_rate(std::span<const double> orbit,
                                  std::span<const double> radii);
/// Symbolic route: log R_k / S_k psi at the given base scales.
RecurrenceEstimate symbolic_rate(const MarkovExpandingMap& map,
                                 const Word& base,
                                 const std::vector<std::size_t>& scales);

/// Least-squares slope of log tau_r against -log r over uncensored radii;
/// nullopt with fewer than two usable radii.
std::optional<double> regression_rate(std::span<const ReturnTime> taus,
                                      std::span<const double> radii);

struct IdentityCheck {
  std::size_t k = 0;
  std::uint64_t ell = 0;
  std::optional<std::size_t> induced_repetition;  // R-hat_k(g w)
  std::size_t base_scale = 0;                     // S-hat_k t + |A|
  std::size_t expected_base = 0;                  // S-hat_{l_k} t
  std::optional<std::size_t> base_repetition;
  bool holds = false;
};

struct PerturbationCheck {
  std::size_t k = 0;
  double deviation = 0.0;  // |S-hat_k t(g w) - S-hat_k t(w)|
  double bound = 0.0;      // k eps_k n
  bool holds = false;
};

struct ConstructOptions {
  std::size_t max_index = 100000;  // K for the l-sequence
  // First l-index; 0 picks 2 for alpha == beta and otherwise the index
  // whose upper-curve value is half the horizon, so that one full
  // oscillation fits.
  std::size_t n0 = 0;
  std::size_t psi_level = 1;
  std::optional<Word> cylinder;  // base cylinder A
  double birkhoff_tolerance = 0.05;
  bool geometric = false;  // also decode the orbit and run the geometric route
};

struct ConstructedPoint {
  double alpha = 0.0;
  double beta = 0.0;
  std::size_t n = 0;
  double lambda = 0.0;
  double mean_return = 0.0;
  double rate_lower = 0.0;  // alpha * lambda * nu-hat
  double rate_upper = 0.0;
  EllSequence ell;
  ReturnAlphabet outer;  // induced letters with t up to the marker's
  InsertionSpec spec;
  Word marker;
  std::vector<Symbol> letters;  // first `horizon` letters of g(w)
  Word base;                    // their flattening
  double x = 0.0;
  std::size_t accessible = 0;   // largest k checked
  std::vector<IdentityCheck> identities;
  std::vector<PerturbationCheck> perturbations;
  RecurrenceEstimate symbolic;
  std::optional<RecurrenceEstimate> geometric;
  SourceSample source;

  bool identities_hold() const;
  bool perturbations_hold() const;
};

ConstructedPoint construct_E_point(const MarkovExpandingMap& map, double alpha,
                                   double beta, std::size_t n,
                                   std::size_t horizon, std::uint64_t seed,
                                   const ConstructOptions& options = {});

struct AeRow {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double x = 0.0;
  std::optional<double> rate;  // regression slope
  double ratio_lower = 0.0;    // tail-window ratio extremes
  double ratio_upper = 0.0;
  std::size_t censored = 0;
};

struct AeSummary {
  std::vector<AeRow> rows;
  std::vector<double> radii;
  double target = 0.0;  // h / lambda
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
};

/// Geometric grid 2^-from .. 2^-to.
std::vector<double> dyadic_radii(int from, int to);

AeSummary ae_rate_experiment(const MarkovExpandingMap& map,
                             const Potential& phi, std::size_t sample_count,
                             std::size_t horizon, std::uint64_t seed,
                             const std::vector<double>& radii,
                             std::size_t threads = 1);

struct LadderRow {
  std::size_t n = 0;
  bool feasible = false;
  double pressure_gap = 0.0;
  double dimension = 0.0;  // h / lambda on Sigma_n
  double lambda = 0.0;
  std::size_t hole_count = 0;
  std::string note;
};

struct Ladder {
  std::vector<LadderRow> rows;
  double full_dimension = 0.0;
  double gap_rate = 0.0;  // fitted slope of log(full - dim_n) against n
};

Ladder dimension_ladder(const MarkovExpandingMap& map,
                        const std::vector<std::size_t>& schedule,
                        std::size_t psi_level = 1);

}  // namespace recur
