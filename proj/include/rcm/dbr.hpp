#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "rcm/ball_geometry.hpp"
#include "rcm/carleson_criteria.hpp"
#include "rcm/measures.hpp"
#include "rcm/quadrature.hpp"

namespace rcm {

/// Nodes with |b| >= 1 - kInnerEpsilon count as unimodular.
inline constexpr double kInnerEpsilon = 1e-6;

/// A holomorphic self-map b of the ball into the disk.
class Symbol {
 public:
  enum class Kind { constant, polynomial, blaschke };
  struct Term {
    std::vector<unsigned> powers;
    Complex coeff;
  };

  /// |c| < 1.
  static Symbol constant(Complex c, std::size_t d);
  /// Accepted when sum |c_a| <= 1 (certified) or when the sup of |b| over a dense
  /// sphere grid stays below 1 + 1e-10; throws std::domain_error otherwise.
  static Symbol polynomial(std::size_t d, std::vector<Term> terms);
  /// d = 1: unimodular * prod (z - a_j)/(1 - conj(a_j) z), |a_j| < 1.
  static Symbol blaschke(std::vector<Complex> zeros, Complex unimodular = 1.0);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  /// Closed-form boundary values: every representation here is continuous on the closed ball.
  bool boundary_closed_form() const { return true; }
  /// True when the bound |b| <= 1 holds exactly rather than on a grid.
  bool certified() const { return certified_; }

  Complex operator()(CoordSpan z) const;

  nlohmann::json to_json() const;
  /// Schema { "kind": "constant" | "polynomial" | "blaschke", "dimension": d, "data": ... }.
  /// constant: data = complex; polynomial: data = [{powers, coeff}]; blaschke: data =
  /// {zeros: [complex], unimodular: complex}. Throws std::invalid_argument.
  static Symbol from_json(const nlohmann::json& doc);
  static Symbol load(const std::string& path);

  std::string describe() const;

 private:
  Kind kind_ = Kind::constant;
  std::size_t dim_ = 1;
  Complex constant_{};
  std::vector<Term> terms_;
  std::vector<Complex> zeros_;
  Complex unimodular_{1.0, 0.0};
  bool certified_ = true;
};

/// b(z), with the closed-form boundary value on the sphere.
Complex eval_symbol(const Symbol& b, const BallPoint& z);

/// (1 - b(z) conj(b(w))) / (1 - <z, w>)^d. Throws std::domain_error unless |w| < 1.
Complex dbr_kernel(const Symbol& b, const BallPoint& w, CoordSpan z);
/// K^b(w, w) = (1 - |b(w)|^2) / (1 - |w|^2)^d.
double dbr_kernel_diagonal(const Symbol& b, const BallPoint& w);

/// min over kernel points of int |K^b_w|^2 d mu / K^b(w, w). b must have a radial limit
/// at every boundary atom of mu; a divergent one is reported by std::domain_error.
CriterionProfile kernel_test(const BallMeasure& mu, const Symbol& b, const SearchGrid& search,
                             const MeasureQuadrature& quad);

struct NecessaryConstant {
  double constant = 0.0;  // max of 1/((1 - |b|^2) g) over constrained nodes
  bool infinite = false;  // g vanishes at a constrained node
  std::vector<std::size_t> violating_nodes;
  std::size_t exempt_nodes = 0;  // |b| >= 1 - eps
  std::size_t constrained_nodes = 0;
};

/// Smallest C with 1 - |b|^2 <= C (1 - |b|^2)^2 g at every grid node where |b| < 1 - eps.
NecessaryConstant necessary_condition_constant(const Symbol& b, const DensityExpr& g,
                                               const SphereGrid& grid, double eps = kInnerEpsilon);
/// Closed-form value for a constant symbol and a constant density: 1/((1 - |c|^2) g),
/// or nullopt when either is not constant (g = 0 returns the infinity flag).
std::optional<NecessaryConstant> necessary_condition_closed_form(const Symbol& b, const DensityExpr& g);

enum class IntegralVerdict { finite, divergent, inconclusive };
std::string to_string(IntegralVerdict v);

struct OneMinusBIntegral {
  std::vector<double> estimates;  // one per grid, coarse to fine
  std::vector<std::size_t> nodes;
  IntegralVerdict verdict = IntegralVerdict::inconclusive;
};

/// int over {|b| < 1} of 1/(1 - |b|) d sigma on grid, refine(grid), ... (count grids).
/// divergent once every step grows by 1.5 or more; finite when successive estimates
/// agree within 5%.
OneMinusBIntegral one_minus_b_integral(const Symbol& b, const SphereGrid& grid, std::size_t count = 4);

/// sigma-weighted fraction of nodes with |b| >= 1 - eps.
double is_inner_estimate(const Symbol& b, const SphereGrid& grid, double eps = kInnerEpsilon);

/// sum_j delta_{w_j} / K^b(w_j, w_j). Throws std::domain_error when some |w_j| >= 1.
BallMeasure sampling_candidate_measure(const Symbol& b, const std::vector<BallPoint>& points);

enum class RefutationVerdict { refuted, not_refuted, inconclusive };
std::string to_string(RefutationVerdict v);

struct RefutationReport {
  RefutationVerdict verdict = RefutationVerdict::inconclusive;
  std::string reason;
  double inner_fraction = 1.0;
  std::optional<std::vector<Complex>> non_inner_node;  // a node with |b| < 1 - eps
  double non_inner_modulus = 1.0;
  double candidate_boundary_mass = 0.0;  // always 0 for the candidate measure
  double candidate_total_mass = 0.0;
  std::vector<double> kernel_trend;      // kernel_test minimum per search refinement
  std::string argmin;
};

/// Combines a non-inner certificate, the candidate measure's empty boundary part and
/// the kernel_test trend under search refinement. refuted needs a strictly decreasing
/// trend that ends below tau or halves at every step.
RefutationReport refute_sampling(const Symbol& b, const std::vector<BallPoint>& points,
                                 const SearchGrid& search, const MeasureQuadrature& quad,
                                 std::size_t refinements = 3, double tau = 1e-2);

}  // namespace rcm
