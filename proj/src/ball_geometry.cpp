#include "rcm/ball_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "rcm/gauss_legendre.hpp"

namespace rcm {

Complex inner(CoordSpan a, CoordSpan b) {
  if (a.size() != b.size()) throw std::domain_error("inner: dimension mismatch");
  Complex s{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::conj(b[k]);
  return s;
}

double euclidean_norm(CoordSpan a) {
  double s = 0.0;
  for (const auto& c : a) s += std::norm(c);
  return std::sqrt(s);
}

namespace {

void require_finite(CoordSpan c, const char* what) {
  for (const auto& x : c)
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
      throw std::domain_error(std::string(what) + ": non-finite coordinate");
}

}  // namespace

BallPoint::BallPoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::domain_error("BallPoint: dimension must be >= 1");
  require_finite(coords_, "BallPoint");
  norm_ = euclidean_norm(coords_);
  if (norm_ > 1.0 + kGeometryTol)
    throw std::domain_error("BallPoint: |z| = " + std::to_string(norm_) + " exceeds 1");
}

BallPoint BallPoint::origin(std::size_t d) { return BallPoint(std::vector<Complex>(d)); }

SpherePoint::SpherePoint(std::vector<Complex> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::domain_error("SpherePoint: dimension must be >= 1");
  require_finite(coords_, "SpherePoint");
  const double n = euclidean_norm(coords_);
  if (std::abs(n - 1.0) > kGeometryTol)
    throw std::domain_error("SpherePoint: |zeta| = " + std::to_string(n) + " is not 1");
}

SpherePoint SpherePoint::normalized(std::vector<Complex> coords) {
  require_finite(coords, "SpherePoint::normalized");
  const double n = euclidean_norm(coords);
  if (!(n > 0.0)) throw std::domain_error("SpherePoint::normalized: zero vector");
  for (auto& c : coords) c /= n;
  return SpherePoint(std::move(coords));
}

SpherePoint SpherePoint::basis(std::size_t d, std::size_t k) {
  if (k >= d) throw std::domain_error("SpherePoint::basis: index out of range");
  std::vector<Complex> c(d);
  c[k] = 1.0;
  return SpherePoint(std::move(c));
}

BallPoint SpherePoint::scaled(double r) const {
  std::vector<Complex> c(coords_);
  for (auto& x : c) x *= r;
  return BallPoint(std::move(c));
}

double niso_gap(CoordSpan a, CoordSpan b) { return std::abs(1.0 - inner(a, b)); }

double niso_distance(const SpherePoint& a, const SpherePoint& b) {
  return std::sqrt(niso_gap(a.coords(), b.coords()));
}

NonisotropicBall::NonisotropicBall(SpherePoint center, double delta)
    : center_(std::move(center)), delta_(delta) {
  if (!(delta > 0.0) || delta > 2.0 + kGeometryTol || !std::isfinite(delta))
    throw std::domain_error("NonisotropicBall: delta must lie in (0, 2]");
  delta_ = std::min(delta_, 2.0);
}

bool NonisotropicBall::contains(CoordSpan xi) const {
  return niso_gap(center_.coords(), xi) <= delta_ + kGeometryTol;
}

bool ball_contains(const NonisotropicBall& q, const SpherePoint& xi) {
  return q.contains(xi.coords());
}

ScaledBall scale_ball(const NonisotropicBall& q, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("scale_ball: r must be positive");
  const double target = r * q.delta();
  const bool clamped = target > 2.0;
  return {NonisotropicBall(q.center(), clamped ? 2.0 : target), clamped};
}

CarlesonWindow::CarlesonWindow(NonisotropicBall ball, double depth, bool closed_outer)
    : ball_(std::move(ball)), depth_(depth), closed_outer_(closed_outer) {
  if (!(depth > 0.0) || depth > 1.0 + kGeometryTol)
    throw std::domain_error("CarlesonWindow: depth must lie in (0, 1]");
  depth_ = std::min(depth_, 1.0);
}

CarlesonWindow CarlesonWindow::standard(const NonisotropicBall& ball, bool closed_outer) {
  return CarlesonWindow(ball, sigma_of_ball(ball.delta(), ball.dim()), closed_outer);
}

bool CarlesonWindow::contains(CoordSpan z) const {
  if (z.size() != ball_.dim()) throw std::domain_error("window_contains: dimension mismatch");
  const double r = euclidean_norm(z);
  if (r == 0.0) return depth_ >= 1.0 && ball_.is_full_sphere();
  if (r < 1.0 - depth_ - kGeometryTol) return false;
  const bool on_sphere = r >= 1.0 - kGeometryTol;
  if (on_sphere && !closed_outer_) return false;
  if (r > 1.0 + kGeometryTol) return false;
  const Complex ip = inner(ball_.center().coords(), z) / r;
  return std::abs(1.0 - ip) <= ball_.delta() + kGeometryTol;
}

bool window_contains(const CarlesonWindow& s, const BallPoint& z) { return s.contains(z.coords()); }

double sigma_of_ball(double delta, std::size_t d) {
  if (d == 0) throw std::domain_error("sigma_of_ball: d must be >= 1");
  if (!(delta > 0.0) || delta > 2.0 + kGeometryTol)
    throw std::domain_error("sigma_of_ball: delta must lie in (0, 2]");
  if (delta >= 2.0) return 1.0;
  if (d == 1) return (2.0 / std::numbers::pi) * std::asin(delta / 2.0);

  // Write w = <xi, zeta> = 1 - t e^{i phi}; the region |1 - w| <= delta inside the
  // disk is cos(phi) >= t/2. Substituting t = 2 cos(beta) makes every factor analytic.
  const double beta0 = std::acos(delta / 2.0);
  const auto outer = gauss_legendre(64, beta0, std::numbers::pi / 2.0);
  const auto power = static_cast<int>(d) - 2;
  double total = 0.0;
  for (std::size_t i = 0; i < outer.nodes.size(); ++i) {
    const double beta = outer.nodes[i];
    const double t = 2.0 * std::cos(beta);
    double inner_integral;
    if (power == 0) {
      inner_integral = 2.0 * beta;
    } else {
      const auto ph = gauss_legendre(48, -beta, beta);
      inner_integral = 0.0;
      for (std::size_t j = 0; j < ph.nodes.size(); ++j)
        inner_integral += ph.weights[j] *
                          std::pow(std::max(0.0, 2.0 * t * std::cos(ph.nodes[j]) - t * t), power);
    }
    total += outer.weights[i] * 2.0 * std::cos(beta) * 2.0 * std::sin(beta) * inner_integral;
  }
  return std::clamp(total * static_cast<double>(d - 1) / std::numbers::pi, 0.0, 1.0);
}

std::vector<Complex> unitary_frame(const SpherePoint& zeta) {
  const std::size_t d = zeta.dim();
  std::vector<std::vector<Complex>> cols;
  cols.emplace_back(zeta.coords().begin(), zeta.coords().end());
  for (std::size_t k = 0; k < d && cols.size() < d; ++k) {
    std::vector<Complex> v(d);
    v[k] = 1.0;
    for (const auto& c : cols) {
      const Complex proj = inner(v, c);
      for (std::size_t i = 0; i < d; ++i) v[i] -= proj * c[i];
    }
    const double n = euclidean_norm(v);
    if (n < 1e-8) continue;
    for (auto& x : v) x /= n;
    cols.push_back(std::move(v));
  }
  std::vector<Complex> u(d * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t i = 0; i < d; ++i) u[i * d + j] = cols[j][i];
  return u;
}

namespace {

// Half-width of the arc Q(zeta, delta) on the circle.
double arc_halfwidth(double delta) { return 2.0 * std::asin(std::min(delta / 2.0, 1.0)); }

double circle_angle(const SpherePoint& a, const SpherePoint& b) {
  return std::abs(std::arg(a[0] * std::conj(b[0])));
}

// Extremum of f on [lo, hi]: dense scan, then golden-section refinement of the best bracket.
double extremum_1d(const std::function<double(double)>& f, double lo, double hi, bool maximize,
                   int samples = 96) {
  const double sign = maximize ? -1.0 : 1.0;
  if (hi <= lo) return f(lo);
  const double step = (hi - lo) / samples;
  int best = 0;
  double best_val = sign * f(lo);
  for (int i = 1; i <= samples; ++i) {
    const double v = sign * f(lo + step * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  double a = std::max(lo, lo + step * (best - 1));
  double b = std::min(hi, lo + step * (best + 1));
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = sign * f(x1), f2 = sign * f(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = sign * f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = sign * f(x2);
    }
  }
  return sign * std::min({best_val, f1, f2});
}

// For xi in Q(a, delta_a) write u = <xi, a> and b = alpha a + beta e with e orthogonal to a.
// Then <xi, b> = conj(alpha) u + conj(beta) v with |v| bounded by sqrt(1 - |u|^2).
struct Projection {
  Complex alpha;
  double beta;
};

Projection project(const SpherePoint& a, const SpherePoint& b) {
  const Complex alpha = inner(b.coords(), a.coords());
  return {alpha, std::sqrt(std::max(0.0, 1.0 - std::norm(alpha)))};
}

// min over xi in Q(a, delta_a) of |1 - <xi, b>| for d >= 2. The objective
// |1 - conj(alpha) u| - beta sqrt(1 - |u|^2) is convex in u, vanishes only at u = alpha,
// so when alpha lies outside the u-region the minimum sits on the region boundary.
double min_gap_over_ball(const Projection& pr, double delta_a) {
  auto on_inner_arc = [&](double phi) {
    const Complex u = 1.0 - delta_a * std::polar(1.0, phi);
    const double r = pr.beta * std::sqrt(std::max(0.0, 1.0 - std::norm(u)));
    return std::abs(1.0 - std::conj(pr.alpha) * u) - r;
  };
  auto on_circle = [&](double theta) { return std::abs(std::polar(1.0, theta) - pr.alpha); };
  const double phi_max = std::acos(std::min(delta_a / 2.0, 1.0));
  const double theta_max = arc_halfwidth(delta_a);
  return std::min(extremum_1d(on_inner_arc, -phi_max, phi_max, false),
                  extremum_1d(on_circle, -theta_max, theta_max, false));
}

// max over xi in Q(c, h) of |1 - <xi, zeta>| for d >= 2, assuming -zeta is not in Q(c, h):
// the only interior local maximum of |1 - <xi, zeta>| is xi = -zeta.
double max_gap_over_ball(const Projection& pr, double h) {
  auto on_inner_arc = [&](double phi) {
    const Complex u = 1.0 - h * std::polar(1.0, phi);
    const double r = pr.beta * std::sqrt(std::max(0.0, 1.0 - std::norm(u)));
    return std::abs(1.0 - std::conj(pr.alpha) * u) + r;
  };
  const double phi_max = std::acos(std::min(h / 2.0, 1.0));
  return extremum_1d(on_inner_arc, -phi_max, phi_max, true);
}

}  // namespace

bool balls_intersect(const NonisotropicBall& a, const NonisotropicBall& b) {
  if (a.dim() != b.dim()) throw std::domain_error("balls_intersect: dimension mismatch");
  if (a.is_full_sphere() || b.is_full_sphere()) return true;
  const double gap = niso_gap(a.center().coords(), b.center().coords());
  if (gap <= std::max(a.delta(), b.delta())) return true;
  if (std::sqrt(gap) > std::sqrt(a.delta()) + std::sqrt(b.delta()) + 1e-12) return false;
  if (a.dim() == 1)
    return circle_angle(a.center(), b.center()) <=
           arc_halfwidth(a.delta()) + arc_halfwidth(b.delta()) + 1e-12;
  return min_gap_over_ball(project(a.center(), b.center()), a.delta()) <= b.delta() + 1e-12;
}

bool ball_inside(const NonisotropicBall& inner_ball, const NonisotropicBall& outer) {
  if (inner_ball.dim() != outer.dim()) throw std::domain_error("ball_inside: dimension mismatch");
  if (outer.is_full_sphere()) return true;
  if (inner_ball.is_full_sphere()) return false;
  const auto& c = inner_ball.center();
  const auto& zeta = outer.center();
  const double h = inner_ball.delta(), big = outer.delta();
  const double gap = niso_gap(c.coords(), zeta.coords());
  if (gap > big) return false;
  if (std::sqrt(gap) + std::sqrt(h) <= std::sqrt(big)) return true;
  if (c.dim() == 1) return circle_angle(c, zeta) + arc_halfwidth(h) <= arc_halfwidth(big);
  // -zeta inside Q(c, h) means the inner ball reaches the antipode (gap 2).
  if (std::abs(1.0 + inner(c.coords(), zeta.coords())) <= h) return false;
  return max_gap_over_ball(project(c, zeta), h) <= big;
}

namespace {

// Samples of Q(zeta, radius), d >= 2, distributed like sigma. Points are drawn in the
// frame of zeta: xi = U (w, sqrt(1 - |w|^2) omega), where w = <xi, zeta> has density
// proportional to (1 - |w|^2)^{d-2} on the part of the disk where |1 - w| <= radius.
std::vector<std::vector<Complex>> cap_samples(const SpherePoint& zeta, double radius,
                                              std::size_t count, std::mt19937_64& rng) {
  const std::size_t d = zeta.dim();
  const auto u = unitary_frame(zeta);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double t_max = std::min(radius, 2.0);
  std::vector<std::vector<Complex>> out;
  out.reserve(count);
  std::vector<Complex> local(d);
  while (out.size() < count) {
    const double t = t_max * std::sqrt(unif(rng));
    const double phi = 2.0 * std::numbers::pi * unif(rng);
    const Complex w = 1.0 - t * std::polar(1.0, phi);
    const double rest = 1.0 - std::norm(w);
    if (rest < 0.0) continue;
    if (d > 2 && unif(rng) > std::pow(rest, static_cast<double>(d) - 2.0)) continue;
    local[0] = w;
    double on = 0.0;
    for (std::size_t k = 1; k < d; ++k) {
      local[k] = Complex(gauss(rng), gauss(rng));
      on += std::norm(local[k]);
    }
    on = std::sqrt(on);
    for (std::size_t k = 1; k < d; ++k) local[k] *= std::sqrt(rest) / on;
    std::vector<Complex> xi(d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) xi[i] += u[i * d + j] * local[j];
    const double n = euclidean_norm(xi);
    for (auto& x : xi) x /= n;
    out.push_back(std::move(xi));
  }
  return out;
}

struct PackingState {
  const NonisotropicBall& doubled;
  double h;
  std::vector<NonisotropicBall> balls;

  bool admissible(const NonisotropicBall& ball) const {
    if (!ball_inside(ball, doubled)) return false;
    return std::none_of(balls.begin(), balls.end(),
                        [&](const auto& other) { return balls_intersect(ball, other); });
  }
  bool covered(CoordSpan x) const {
    return std::any_of(balls.begin(), balls.end(), [&](const auto& b) {
      return niso_gap(b.center().coords(), x) <= 2.0 * h + kGeometryTol;
    });
  }
  /// min_j |1 - <zeta_j, x>| / h: the dilation of the family that reaches x.
  double reach(CoordSpan x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : balls) best = std::min(best, niso_gap(b.center().coords(), x) / h);
    return best;
  }
};

std::vector<std::vector<Complex>> arc_points(const SpherePoint& zeta, double halfwidth,
                                             double step, bool full) {
  const auto n = static_cast<std::size_t>(std::ceil(2.0 * halfwidth / step));
  std::vector<std::vector<Complex>> out;
  for (std::size_t i = 0; i <= n; ++i) {
    if (full && i == n) break;
    const double t = -halfwidth + 2.0 * halfwidth * static_cast<double>(i) / static_cast<double>(n);
    out.push_back({zeta[0] * std::polar(1.0, t)});
  }
  return out;
}

}  // namespace

Packing greedy_packing(const NonisotropicBall& q, double h, std::uint64_t seed) {
  if (!(h > 0.0) || !(h < q.delta()))
    throw std::domain_error("greedy_packing: need 0 < h < delta(Q)");
  const std::size_t d = q.dim();
  const auto& zeta = q.center();
  const NonisotropicBall doubled = scale_ball(q, 2.0).ball;
  PackingState state{doubled, h, {}};
  Packing out;

  if (d == 1) {
    // First-fit sweep of 2Q from one end to the other at gap spacing h/4.
    const bool full = doubled.is_full_sphere();
    const double width = full ? std::numbers::pi : arc_halfwidth(doubled.delta());
    const auto cand = arc_points(zeta, width, 2.0 * std::asin(h / 8.0), full);
    if (cand.empty()) throw std::runtime_error("greedy_packing: empty candidate grid");
    out.candidates = cand.size();
    for (const auto& c : cand) {
      NonisotropicBall ball(SpherePoint(c), h);
      if (state.admissible(ball)) state.balls.push_back(std::move(ball));
    }
    const auto cert = arc_points(zeta, arc_halfwidth(q.delta()), 2.0 * std::asin(h / 64.0),
                                 q.is_full_sphere());
    for (const auto& x : cert) {
      ++out.certificate_points;
      if (!state.covered(x)) ++out.uncovered;
      out.cover_factor = std::max(out.cover_factor, state.reach(x));
    }
    out.balls = std::move(state.balls);
    return out;
  }

  // d >= 2: first-fit driven by the cover. Uncovered points of Q are visited from the
  // center outward; each one receives the admissible candidate ball nearest to it.
  std::mt19937_64 rng(seed);
  const double scale = std::pow(2.0 * q.delta() / h, static_cast<double>(d));
  const auto pool_size = static_cast<std::size_t>(std::clamp(300.0 * scale, 4000.0, 40000.0));
  auto cand = cap_samples(zeta, doubled.delta(), pool_size, rng);
  cand.insert(cand.begin(), std::vector<Complex>(zeta.coords().begin(), zeta.coords().end()));
  auto gap_to_center = [&](const std::vector<Complex>& x) { return niso_gap(x, zeta.coords()); };
  std::stable_sort(cand.begin(), cand.end(),
                   [&](const auto& a, const auto& b) { return gap_to_center(a) < gap_to_center(b); });
  out.candidates = cand.size();

  std::vector<const std::vector<Complex>*> cert;
  for (const auto& x : cand)
    if (q.contains(x)) cert.push_back(&x);

  std::vector<char> rejected(cand.size(), 0);
  std::vector<std::pair<double, std::size_t>> near;
  for (const auto* x : cert) {
    if (state.covered(*x)) continue;
    near.clear();
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (rejected[i]) continue;
      const double g = niso_gap(cand[i], *x);
      if (g <= 2.0 * h) near.emplace_back(g, i);
    }
    std::sort(near.begin(), near.end());
    for (const auto& [g, i] : near) {
      NonisotropicBall ball(SpherePoint::normalized(cand[i]), h);
      if (state.admissible(ball)) {
        state.balls.push_back(std::move(ball));
        break;
      }
      rejected[i] = 1;  // admissibility only shrinks as balls are added
    }
  }
  for (std::size_t i = 0; i < cand.size(); ++i) {
    if (rejected[i]) continue;
    NonisotropicBall ball(SpherePoint::normalized(cand[i]), h);
    if (state.admissible(ball)) state.balls.push_back(std::move(ball));
  }

  out.certificate_points = cert.size();
  for (const auto* x : cert) {
    if (!state.covered(*x)) ++out.uncovered;
    out.cover_factor = std::max(out.cover_factor, state.reach(*x));
  }
  out.balls = std::move(state.balls);
  return out;
}

}  // namespace rcm
