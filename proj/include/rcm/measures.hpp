#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "rcm/ball_geometry.hpp"
#include "rcm/quadrature.hpp"

namespace rcm {

/// A closed-form nonnegative density written in a small expression language.
///
///   expr    := term (('+' | '-') term)*
///   term    := power (('*' | '/') power)*
///   power   := unary ('^' power)?
///   unary   := '-' unary | primary
///   primary := number | 'pi' | 'r' | call | '(' expr ')'
///   call    := re(k) | im(k) | absz(k)         coordinate k (1-based) of z
///            | absip(point)                    |<z, point>|
///            | ind(point, delta)               1 if z/|z| lies in Q(point, delta), else 0
///            | step(expr)                      1 if expr >= 0, else 0
///            | abs(expr) | sqrt(expr) | exp(expr)
///   point   := '[' complex (',' complex)* ']'
///   complex := number | number 'i' | number ('+' | '-') number 'i'
///
/// r is |z|. Points given to absip/ind are normalized onto the unit sphere for ind.
class DensityExpr {
 public:
  /// Throws std::invalid_argument with the offending position on a syntax error.
  static DensityExpr parse(std::string_view source, std::size_t dim);
  static DensityExpr constant(double value, std::size_t dim);

  /// Throws std::domain_error when the value is negative or not finite.
  double operator()(CoordSpan z) const;
  double evaluate_unchecked(CoordSpan z) const;

  const std::string& source() const { return source_; }
  std::size_t dim() const { return dim_; }
  /// Set when the expression is a bare number.
  std::optional<double> constant_value() const { return constant_; }

  struct Node;

 private:
  std::string source_;
  std::size_t dim_ = 0;
  std::shared_ptr<const Node> root_;
  std::optional<double> constant_;
};

struct InteriorAtom {
  BallPoint point;  // |point| < 1
  double mass;
};

struct BoundaryAtom {
  SpherePoint point;
  double mass;
};

/// mu = sum of interior atoms + (interior density) nu + g sigma + sum of boundary atoms,
/// with nu normalized to mass 1 on the ball.
class BallMeasure {
 public:
  BallMeasure(std::size_t dim, std::vector<InteriorAtom> interior_atoms,
              std::optional<DensityExpr> interior_density,
              std::optional<DensityExpr> boundary_density, std::vector<BoundaryAtom> boundary_atoms);

  static BallMeasure surface(std::size_t dim, double c = 1.0);
  static BallMeasure volume(std::size_t dim, double c = 1.0);
  static BallMeasure point_mass(const BallPoint& at, double mass = 1.0);

  std::size_t dim() const { return dim_; }
  const std::vector<InteriorAtom>& interior_atoms() const { return interior_atoms_; }
  const std::vector<BoundaryAtom>& boundary_atoms() const { return boundary_atoms_; }
  const std::optional<DensityExpr>& interior_density() const { return interior_density_; }
  const std::optional<DensityExpr>& boundary_density() const { return boundary_density_; }
  /// Density factors applied on top of the expressions (scaled() multiplies them).
  double interior_scale() const { return interior_scale_; }
  double boundary_scale() const { return boundary_scale_; }

  /// g(xi), zero when there is no boundary density.
  double boundary_density_at(CoordSpan xi) const;
  double interior_density_at(CoordSpan z) const;

  /// c mu for c > 0.
  BallMeasure scaled(double c) const;

  nlohmann::json to_json() const;
  /// Throws std::invalid_argument on malformed documents or negative masses.
  static BallMeasure from_json(const nlohmann::json& doc);
  static BallMeasure load(const std::string& path);

 private:
  std::size_t dim_;
  std::vector<InteriorAtom> interior_atoms_;
  std::optional<DensityExpr> interior_density_;
  std::optional<DensityExpr> boundary_density_;
  std::vector<BoundaryAtom> boundary_atoms_;
  double interior_scale_ = 1.0;
  double boundary_scale_ = 1.0;
};

/// Points in measure files: a list of complex entries, each [re, im] or a bare number.
std::vector<Complex> parse_point(const nlohmann::json& j, std::size_t dim);
nlohmann::json point_to_json(CoordSpan z);

/// Quadrature shared by every grid-based measure evaluation. radial_nodes is the
/// Gauss-Legendre count per window.
struct MeasureQuadrature {
  SphereGrid sphere;
  std::size_t radial_nodes = 24;
};

/// int_Q g d sigma by node sums plus boundary atoms in Q. Interior parts never count.
double measure_of_ball(const BallMeasure& mu, const NonisotropicBall& q, const SphereGrid& grid);

/// sigma(Q) as the grid sees it: the node-indicator sum.
double grid_sigma(const NonisotropicBall& q, const SphereGrid& grid);

/// Interior density over S by polar quadrature, interior atoms inside S, and the
/// boundary parts over Q when S is closed at the sphere.
double measure_of_window(const BallMeasure& mu, const CarlesonWindow& s, const SphereGrid& grid,
                         const RadialRule& radial);

/// Total mass; the interior density is integrated with a full-ball radial rule.
double total_mass(const BallMeasure& mu, const MeasureQuadrature& quad);

struct MeasureIntegral {
  double value = 0.0;
  bool infinite = false;
  std::string note;  // which boundary atom diverged, when infinite
};

enum class BoundaryEvaluation { direct, radial_limit };

/// int |F|^p d mu. With radial_limit the boundary atoms use boundary_radial_limit of F,
/// and a divergent limit yields the infinity flag instead of a number.
MeasureIntegral integrate_abs_power(const BallMeasure& mu, const std::function<Complex(CoordSpan)>& f,
                                    double p, const MeasureQuadrature& quad,
                                    BoundaryEvaluation mode = BoundaryEvaluation::direct);

/// int f d mu for a real f; throws std::domain_error on a negative value.
double integrate_measure(const BallMeasure& mu, const std::function<double(CoordSpan)>& f,
                         const MeasureQuadrature& quad);

/// ratios[i][j] = mu(Q(centers[i], deltas[j])) / sigma(Q(centers[i], deltas[j])), both by
/// node sums; NaN where the grid has no node in the ball.
struct DensityRatioTable {
  std::vector<SpherePoint> centers;
  std::vector<double> deltas;
  std::vector<std::vector<double>> ratios;
};

DensityRatioTable radon_nikodym_profile(const BallMeasure& mu, const std::vector<SpherePoint>& centers,
                                        const std::vector<double>& deltas, const SphereGrid& grid);

}  // namespace rcm
