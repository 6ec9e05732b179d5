#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rcm/ball_geometry.hpp"

namespace rcm {

enum class SphereScheme { uniform_angle, torus_product, monte_carlo };

std::string to_string(SphereScheme scheme);

/// Node/weight rule for the normalized surface measure sigma on S_d.
/// Nodes are stored flat: node i occupies coordinates [i*d, (i+1)*d).
class SphereGrid {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  std::size_t resolution() const { return resolution_; }
  SphereScheme scheme() const { return scheme_; }
  std::uint64_t seed() const { return seed_; }

  CoordSpan node(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }

  friend SphereGrid sphere_grid(std::size_t, std::size_t, SphereScheme, std::uint64_t);

 private:
  std::size_t dim_ = 0;
  std::size_t resolution_ = 0;
  SphereScheme scheme_ = SphereScheme::uniform_angle;
  std::uint64_t seed_ = 0;
  std::vector<Complex> coords_;
  std::vector<double> weights_;
};

/// The natural scheme for d: uniform angles (d = 1), Hopf torus product (d = 2),
/// Monte Carlo otherwise.
SphereScheme default_scheme(std::size_t d);

/// resolution counts angles (uniform), points per torus axis (torus_product, so
/// resolution^3 nodes), or samples (monte_carlo). Throws std::domain_error when
/// resolution < 4 or the scheme does not exist in dimension d.
SphereGrid sphere_grid(std::size_t d, std::size_t resolution, SphereScheme scheme,
                       std::uint64_t seed = 1);
SphereGrid sphere_grid(std::size_t d, std::size_t resolution, std::uint64_t seed = 1);

/// Same scheme and seed with twice the resolution. Monte Carlo grids keep their
/// first samples, so successive refinements are nested.
SphereGrid refine(const SphereGrid& grid);

template <class T>
using SphereFunction = std::function<T(CoordSpan)>;

/// sum_i w_i f(node_i) with compensated summation. Throws std::domain_error naming
/// the node when f is not finite there.
Complex integrate_sphere(const SphereFunction<Complex>& f, const SphereGrid& grid);
double integrate_sphere_real(const SphereFunction<double>& f, const SphereGrid& grid);

/// Gauss-Legendre rule on [1 - depth, 1] for the radial part of the volume measure,
/// normalized so that the full ball has mass 1: weights carry 2d r^{2d-1}.
class RadialRule {
 public:
  RadialRule(std::size_t d, double depth, std::size_t nodes);

  std::size_t dim() const { return dim_; }
  double depth() const { return depth_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Exact volume mass of the shell 1 - depth <= |z| <= 1, that is 1 - (1 - depth)^{2d}.
  double shell_mass() const;

 private:
  std::size_t dim_;
  double depth_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// sum_i sum_j w_i v_j f(r_j xi_i) [xi_i in Q] over the window's ball Q. The radial
/// rule must have the window's depth. Nodes sit strictly inside the ball, so the
/// window's closed_outer flag does not affect the value.
Complex integrate_window(const SphereFunction<Complex>& f, const CarlesonWindow& window,
                         const SphereGrid& grid, const RadialRule& radial);

/// Compensated accumulator used by every grid sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = total_ + y;
    carry_ = (t - total_) - y;
    total_ = t;
  }
  double value() const { return total_; }

 private:
  double total_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace rcm
