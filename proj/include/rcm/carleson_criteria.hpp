#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "rcm/ball_geometry.hpp"
#include "rcm/hardy_kernels.hpp"
#include "rcm/measures.hpp"

namespace rcm {

enum class ConditionTag {
  integral_inequality,  // int |f|^p d mu >= C ||f||^p
  kernel_mass,          // int |K_w|^p d mu >= C
  ball_mass,            // mu(Q) >= C sigma(Q)
  window,               // mu(S_Q) >= C sigma(Q)
  forward,              // mu(S_Q) <= C sigma(Q)
};

std::string to_string(ConditionTag tag);

struct SearchConfig {
  std::size_t centers = 32;
  double delta0 = 1.0;
  std::size_t delta_levels = 4;   // delta_k = delta0 2^{-k}, k = 0 .. delta_levels-1
  std::size_t kernel_levels = 4;  // r_k = 1 - 2^{-k}, k = 1 .. kernel_levels
  std::size_t level_step = 2;     // levels added to both ladders per refinement
  std::size_t max_kernel_level = 40;
  std::size_t max_delta_level = 40;
  std::uint64_t seed = 7;
};

/// Discretization of "all balls Q(zeta, delta)" and "all w in the ball": centers on the
/// sphere (uniform angles for d = 1, nested seeded samples otherwise), a dyadic radius
/// ladder and kernel points w = r_k zeta.
class SearchGrid {
 public:
  SearchGrid(std::size_t d, SearchConfig config);

  std::size_t dim() const { return dim_; }
  const SearchConfig& config() const { return config_; }
  const std::vector<SpherePoint>& centers() const { return centers_; }
  std::vector<double> deltas() const;
  std::vector<double> radii() const;
  std::vector<BallPoint> kernel_points() const;

  /// Twice the centers and level_step more levels on each ladder (up to the caps).
  SearchGrid refined() const;

 private:
  std::size_t dim_;
  SearchConfig config_;
  std::vector<SpherePoint> centers_;
};

struct ProfileEntry {
  std::size_t center;  // index into the search grid's centers
  double parameter;    // delta for ball conditions, r for kernel conditions
  double value;
};

struct CriterionProfile {
  ConditionTag tag{};
  bool maximize = false;
  std::vector<ProfileEntry> entries;
  double extremal = 0.0;
  std::size_t arg = 0;      // index into entries
  std::size_t skipped = 0;  // balls with no grid node, left out
};

CriterionProfile condition_iii_profile(const BallMeasure& mu, const SearchGrid& search,
                                       const SphereGrid& grid);
CriterionProfile condition_ii_profile(const BallMeasure& mu, const Exponents& e,
                                      const SearchGrid& search, const MeasureQuadrature& quad);
CriterionProfile window_profile(const BallMeasure& mu, const SearchGrid& search,
                                const MeasureQuadrature& quad);
CriterionProfile forward_profile(const BallMeasure& mu, const SearchGrid& search,
                                 const MeasureQuadrature& quad);

/// Kernels at every search point, random pairs of kernels, and low-degree monomials.
std::vector<TestFunction> default_test_family(const SearchGrid& search, const Exponents& e);

struct WitnessResult {
  double min_ratio = 0.0;
  std::size_t index = 0;  // minimizing member of the family
  std::string witness;
  std::vector<double> ratios;
};

/// min over the family of int |f|^p d mu / ||f||^p. A recorded exact norm is used when
/// present, otherwise the boundary quadrature norm. Throws std::domain_error on a
/// zero-norm member or an empty family.
WitnessResult reverse_inequality_witness(const BallMeasure& mu, const Exponents& e,
                                         const std::vector<TestFunction>& family,
                                         const MeasureQuadrature& quad);

enum class Verdict { positive, degenerate, inconclusive };
std::string to_string(Verdict v);

/// positive: last value >= tau and at least half the previous one. degenerate: last
/// value < tau, or every refinement at least halved the value. Otherwise inconclusive.
Verdict classify_trend(const std::vector<double>& trend, double tau);

struct ConditionSummary {
  ConditionTag tag{};
  std::vector<double> trend;   // extremal value per refinement
  std::string argmin;          // parameter of the extremal entry at the finest grid
  Verdict verdict = Verdict::inconclusive;
};

struct EquivalenceReport {
  double tau = 1e-3;
  std::vector<ConditionSummary> conditions;  // (i), (ii), (iii)
  ConditionSummary window;
  ConditionSummary forward;
  bool agree = false;  // all three reverse verdicts positive, or all degenerate
  std::vector<CriterionProfile> finest;  // profiles at the finest search grid
};

EquivalenceReport equivalence_report(const BallMeasure& mu, const Exponents& e,
                                     const SearchGrid& search, const MeasureQuadrature& quad,
                                     double tau = 1e-3, std::size_t refinements = 3);

}  // namespace rcm
