#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rcm/ball_geometry.hpp"
#include "rcm/quadrature.hpp"

namespace rcm {

/// Hardy exponent p in (1, inf) with its conjugate q, in dimension d.
class Exponents {
 public:
  Exponents(double p, std::size_t d);

  double p() const { return p_; }
  double q() const { return q_; }
  std::size_t d() const { return d_; }

 private:
  double p_;
  double q_;
  std::size_t d_;
};

/// k_w(z) = (1 - <z, w>)^{-d}. Throws std::domain_error unless |w| < 1.
Complex cauchy_kernel(const BallPoint& w, CoordSpan z);

/// (1 - |w|^2)^{-d/q}. This is the exact H^2 norm; for p != 2 it is only comparable
/// to the H^p norm, see kernel_norm_exact.
double kernel_norm(const BallPoint& w, const Exponents& e);

/// The H^p norm of k_w from the series
///   ||k_w||_p^p = sum_n ((s)_n)^2 / ((d)_n n!) |w|^{2n},  s = pd/2,
/// which reduces to the closed form when p = 2.
double kernel_norm_exact(const BallPoint& w, const Exponents& e);

/// (int |k_w|^p d sigma)^{1/p} on the grid.
double kernel_norm_quadrature(const BallPoint& w, const Exponents& e, const SphereGrid& grid);

/// A function continuous on the closed ball: either sum_j c_j k_{w_j} with |w_j| < 1,
/// or a polynomial sum c_a z^a.
class TestFunction {
 public:
  struct Monomial {
    std::vector<unsigned> powers;
    Complex coeff;
  };

  static TestFunction kernels(std::size_t d, std::vector<Complex> coeffs,
                              std::vector<BallPoint> poles);
  static TestFunction polynomial(std::size_t d, std::vector<Monomial> terms);

  std::size_t dim() const { return dim_; }
  bool is_kernel_combination() const { return !poles_.empty(); }
  const std::vector<BallPoint>& poles() const { return poles_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }

  Complex operator()(CoordSpan z) const;

  /// Multiplies by c; a recorded norm is rescaled by |c|.
  TestFunction scaled(Complex c) const;
  /// Attaches the exact H^p norm for exponent p.
  TestFunction with_known_norm(double p, double norm) const;
  std::optional<double> known_norm(double p) const;

  std::string describe() const;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> coeffs_;
  std::vector<BallPoint> poles_;
  std::vector<Monomial> terms_;
  std::optional<double> known_norm_;
  double known_p_ = 0.0;
};

/// K_w = k_w / ||k_w||_{H^p}, scaled with the exact norm so that ||K_w|| = 1.
TestFunction normalized_kernel(const BallPoint& w, const Exponents& e);

/// (1 - |w|^2)^d / |1 - <w, xi>|^{2d}.
double poisson_kernel(const BallPoint& w, CoordSpan xi);

/// Phi_h(z) = (1/h) int_{S_{Q,h}} (1 - |w|^2)^{pd-d} / |1 - <z, w>|^{pd} d nu(w) with
/// the volume measure normalized to mass 1. The grid version sums over sphere nodes
/// and radial nodes; the radial rule must have depth h.
double phi_h(CoordSpan z, const NonisotropicBall& q, double h, const Exponents& e,
             const SphereGrid& grid, const RadialRule& radial);

/// d = 1 only: nested adaptive Gauss-Kronrod in angle and radius, relative tolerance tol.
double phi_h_disk(Complex z, const NonisotropicBall& q, double h, const Exponents& e,
                  double tol = 1e-10);

/// (int |f|^p d sigma)^{1/p} over the sphere.
double hp_norm(const TestFunction& f, const Exponents& e, const SphereGrid& grid);

struct RadialLimit {
  Complex value;
  bool converged = false;
  std::size_t steps = 0;
};

/// Evaluates f(r_k zeta) at r_k = 1 - 2^{-k}, k = 1..max_steps, with one Richardson
/// step per level; converged once successive extrapolates agree to tol (relative to
/// max(1, |value|)). Divergence is reported through the flag, never by exception.
RadialLimit boundary_radial_limit(const std::function<Complex(CoordSpan)>& f,
                                  const SpherePoint& zeta, std::size_t max_steps = 40,
                                  double tol = 1e-7);

/// int_Q |F(r xi)| (1 - r^2)^d / |1 - <z, r xi>|^{2d} d sigma(xi) on the grid.
double poisson_mean(const std::function<Complex(CoordSpan)>& f, const NonisotropicBall& q,
                    CoordSpan z, double r, const SphereGrid& grid);

}  // namespace rcm
