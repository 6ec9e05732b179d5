#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcm {

using Complex = std::complex<double>;
using CoordSpan = std::span<const Complex>;

/// Tolerance used for the unit-norm and ball-membership invariants.
inline constexpr double kGeometryTol = 1e-12;

/// Hermitian inner product <a, b> = sum_k a_k conj(b_k).
Complex inner(CoordSpan a, CoordSpan b);
double euclidean_norm(CoordSpan a);

/// A point of the closed unit ball of C^d.
class BallPoint {
 public:
  /// Throws std::domain_error on d = 0 or |z| > 1 + kGeometryTol.
  explicit BallPoint(std::vector<Complex> coords);

  static BallPoint origin(std::size_t d);

  std::size_t dim() const { return coords_.size(); }
  CoordSpan coords() const { return coords_; }
  const Complex& operator[](std::size_t k) const { return coords_[k]; }
  double norm() const { return norm_; }

 private:
  std::vector<Complex> coords_;
  double norm_;
};

/// A point of the unit sphere S_d = boundary of the ball in C^d.
class SpherePoint {
 public:
  /// Throws std::domain_error unless | |coords| - 1 | <= kGeometryTol.
  explicit SpherePoint(std::vector<Complex> coords);

  /// Rescales a nonzero vector onto the sphere.
  static SpherePoint normalized(std::vector<Complex> coords);
  /// Standard basis vector e_{k+1} (k is zero based).
  static SpherePoint basis(std::size_t d, std::size_t k = 0);

  std::size_t dim() const { return coords_.size(); }
  CoordSpan coords() const { return coords_; }
  const Complex& operator[](std::size_t k) const { return coords_[k]; }

  BallPoint scaled(double r) const;
  BallPoint as_ball() const { return BallPoint(coords_); }

 private:
  std::vector<Complex> coords_;
};

/// rho(a, b) = |1 - <a, b>|^{1/2}. Throws std::domain_error on dimension mismatch.
double niso_distance(const SpherePoint& a, const SpherePoint& b);
/// |1 - <a, b>|, the quantity the ball radius delta is measured in.
double niso_gap(CoordSpan a, CoordSpan b);

/// Q(center, delta) = { xi in S_d : |1 - <center, xi>| <= delta }, 0 < delta <= 2.
class NonisotropicBall {
 public:
  NonisotropicBall(SpherePoint center, double delta);

  const SpherePoint& center() const { return center_; }
  double delta() const { return delta_; }
  std::size_t dim() const { return center_.dim(); }
  /// delta == 2: the ball is the whole sphere.
  bool is_full_sphere() const { return delta_ >= 2.0 - kGeometryTol; }

  bool contains(CoordSpan xi) const;

 private:
  SpherePoint center_;
  double delta_;
};

bool ball_contains(const NonisotropicBall& q, const SpherePoint& xi);

struct ScaledBall {
  NonisotropicBall ball;
  bool clamped;  // r * delta exceeded 2 and was cut back to the full sphere
};

/// rQ = Q(center, r delta), clamped at delta = 2. Throws std::domain_error for r <= 0.
ScaledBall scale_ball(const NonisotropicBall& q, double r);

/// S_{Q,h} = { z : 1 - h <= |z| <= 1, z/|z| in Q }. With closed_outer == false the
/// sphere itself is excluded (|z| < 1).
class CarlesonWindow {
 public:
  CarlesonWindow(NonisotropicBall ball, double depth, bool closed_outer = true);

  /// The standard window S_Q = S_{Q, sigma(Q)}.
  static CarlesonWindow standard(const NonisotropicBall& ball, bool closed_outer = true);

  const NonisotropicBall& ball() const { return ball_; }
  double depth() const { return depth_; }
  bool closed_outer() const { return closed_outer_; }

  bool contains(CoordSpan z) const;

 private:
  NonisotropicBall ball_;
  double depth_;
  bool closed_outer_;
};

/// The origin lies in no window of depth h < 1; for h = 1 it lies in the window
/// exactly when Q is the whole sphere.
bool window_contains(const CarlesonWindow& s, const BallPoint& z);

/// sigma(Q(zeta, delta)) for the normalized surface measure on S_d.
/// d = 1 uses (2/pi) asin(delta/2); d >= 2 integrates the density of <zeta, e_1>.
double sigma_of_ball(double delta, std::size_t d);

struct Packing {
  std::vector<NonisotropicBall> balls;
  std::size_t candidates = 0;        // candidate centers examined
  std::size_t certificate_points = 0; // points of Q checked for the doubled cover
  std::size_t uncovered = 0;          // certificate points outside every 2Q_j
  double cover_factor = 0.0;          // smallest m with every certificate point in some mQ_j

  bool covers() const { return uncovered == 0; }
};

/// Maximal family of pairwise disjoint balls Q(zeta_j, h) inside 2Q, with a covering
/// certificate recording how many sample points of Q are left outside every 2Q_j.
/// d = 1 sweeps a grid of spacing h/4 along the arc. d >= 2 visits sampled points of Q
/// from the center outward and gives each uncovered one the nearest admissible ball,
/// then completes the family first-fit over all candidates so that it is maximal.
/// Throws std::domain_error unless 0 < h < delta(Q).
Packing greedy_packing(const NonisotropicBall& q, double h, std::uint64_t seed = 0x5eed);

/// Exact tests used by the packing (d >= 1).
bool balls_intersect(const NonisotropicBall& a, const NonisotropicBall& b);
bool ball_inside(const NonisotropicBall& inner_ball, const NonisotropicBall& outer);

/// A unitary matrix (row-major d x d) whose first column is zeta.
std::vector<Complex> unitary_frame(const SpherePoint& zeta);

}  // namespace rcm
