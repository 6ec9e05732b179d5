#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "rcm/ball_geometry.hpp"

using namespace rcm;

namespace {

SpherePoint random_sphere_point(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> v(d);
  for (auto& c : v) c = {g(rng), g(rng)};
  return SpherePoint::normalized(v);
}

SpherePoint on_circle(double theta) { return SpherePoint({std::polar(1.0, theta)}); }

}  // namespace

TEST_CASE("nonisotropic distance examples") {
  const auto e1 = SpherePoint::basis(2, 0), e2 = SpherePoint::basis(2, 1);
  CHECK(niso_distance(e1, e1) == doctest::Approx(0.0));
  CHECK(niso_distance(on_circle(0.0), on_circle(std::numbers::pi)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(niso_distance(e1, e2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(SpherePoint({Complex(0.5, 0.0)}), std::domain_error);
  CHECK_THROWS_AS(niso_distance(e1, on_circle(0.0)), std::domain_error);
}

TEST_CASE("ball membership examples") {
  const auto e1 = SpherePoint::basis(1);
  CHECK(ball_contains(NonisotropicBall(e1, 2.0), on_circle(2.4)));
  CHECK_FALSE(ball_contains(NonisotropicBall(e1, 0.5), on_circle(std::numbers::pi)));
  CHECK(ball_contains(NonisotropicBall(SpherePoint::basis(2, 0), 1.0), SpherePoint::basis(2, 1)));
  CHECK_THROWS_AS(NonisotropicBall(e1, 0.0), std::domain_error);
  CHECK_THROWS_AS(NonisotropicBall(e1, 2.5), std::domain_error);
}

TEST_CASE("window membership and the origin convention") {
  const auto e1 = SpherePoint::basis(1);
  CHECK(window_contains(CarlesonWindow(NonisotropicBall(e1, 2.0), 1.0), e1.scaled(0.5)));
  CHECK_FALSE(window_contains(CarlesonWindow(NonisotropicBall(e1, 0.1), 0.1), e1.scaled(0.5)));
  CHECK(window_contains(CarlesonWindow(NonisotropicBall(e1, 0.1), 0.1), e1.as_ball()));
  CHECK_FALSE(window_contains(CarlesonWindow(NonisotropicBall(e1, 0.1), 0.1, false), e1.as_ball()));
  CHECK_FALSE(window_contains(CarlesonWindow(NonisotropicBall(e1, 2.0), 0.5), BallPoint::origin(1)));
  CHECK(window_contains(CarlesonWindow(NonisotropicBall(e1, 2.0), 1.0), BallPoint::origin(1)));
  CHECK_FALSE(window_contains(CarlesonWindow(NonisotropicBall(e1, 1.0), 1.0), BallPoint::origin(1)));
}

TEST_CASE("ball dilation") {
  const auto z = SpherePoint::basis(2, 1);
  auto s = scale_ball(NonisotropicBall(z, 0.3), 2.0);
  CHECK(s.ball.delta() == doctest::Approx(0.6));
  CHECK_FALSE(s.clamped);
  CHECK(scale_ball(NonisotropicBall(z, 0.7), 1.0).ball.delta() == 0.7);
  s = scale_ball(NonisotropicBall(z, 1.5), 2.0);
  CHECK(s.ball.delta() == 2.0);
  CHECK(s.clamped);
  CHECK_THROWS_AS(scale_ball(NonisotropicBall(z, 0.5), 0.0), std::domain_error);
}

TEST_CASE("surface measure of balls: closed forms") {
  for (std::size_t d : {1, 2, 3, 4}) CHECK(sigma_of_ball(2.0, d) == doctest::Approx(1.0));
  CHECK(sigma_of_ball(std::sqrt(2.0), 1) == doctest::Approx(0.5).epsilon(1e-14));
  // Oracle for d = 2: <zeta, e1> is uniform on the disk, so sigma(Q) is the area of
  // {w in D : |1 - w| <= delta} over pi (lens of two circles).
  for (double delta : {0.3, 0.5, 1.0, 1.7}) {
    const double R = 1.0, r = delta;  // unit disk and disk of radius delta centered at 1
    const double a = std::acos((1.0 + r * r - R * R) / (2.0 * r));
    const double b = std::acos((1.0 + R * R - r * r) / (2.0 * R));
    const double lens = r * r * a + R * R * b - 0.5 * std::sqrt((-1.0 + r + R) * (1.0 + r - R) * (1.0 - r + R) * (1.0 + r + R));
    CHECK(sigma_of_ball(delta, 2) == doctest::Approx(lens / std::numbers::pi).epsilon(1e-10));
  }
  CHECK_THROWS_AS(sigma_of_ball(0.0, 2), std::domain_error);
  CHECK_THROWS_AS(sigma_of_ball(2.1, 1), std::domain_error);
}

TEST_CASE("surface measure of a ball against Monte Carlo (d = 2, delta = 0.5)") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> g(0.0, 1.0);
  const std::size_t n = 10'000'000;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a(g(rng), g(rng)), b(g(rng), g(rng));
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (std::abs(1.0 - a / norm) <= 0.5) ++hits;  // <xi, e1> = xi_1
  }
  const double est = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(est * (1.0 - est) / static_cast<double>(n));
  CHECK(std::abs(sigma_of_ball(0.5, 2) - est) <= 3.0 * se);
}

TEST_CASE("unitary invariance of sigma(Q) by Monte Carlo around two centers") {
  std::mt19937_64 rng(99);
  const std::size_t d = 3, n = 400000;
  const auto c1 = SpherePoint::basis(d, 0), c2 = random_sphere_point(rng, d);
  const NonisotropicBall q1(c1, 0.8), q2(c2, 0.8);
  std::size_t h1 = 0, h2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = random_sphere_point(rng, d);
    h1 += ball_contains(q1, xi);
    h2 += ball_contains(q2, xi);
  }
  const double p1 = double(h1) / n, p2 = double(h2) / n;
  const double se = std::sqrt(p1 * (1 - p1) / n + p2 * (1 - p2) / n);
  CHECK(std::abs(p1 - p2) <= 4.0 * se);
  CHECK(std::abs(p1 - sigma_of_ball(0.8, d)) <= 4.0 * std::sqrt(p1 * (1 - p1) / n));
}

TEST_CASE("quasi-triangle inequality on random triples") {
  std::mt19937_64 rng(5);
  for (std::size_t d : {1, 2, 3}) {
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
      const auto a = random_sphere_point(rng, d), b = random_sphere_point(rng, d), c = random_sphere_point(rng, d);
      if (niso_distance(a, c) > niso_distance(a, b) + niso_distance(b, c) + 1e-12) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("monotonicity in the radius") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.01, 2.0);
  for (std::size_t d : {1, 2, 3}) {
    const auto zeta = random_sphere_point(rng, d);
    for (int i = 0; i < 2000; ++i) {
      double d1 = u(rng), d2 = u(rng);
      if (d1 > d2) std::swap(d1, d2);
      const auto xi = random_sphere_point(rng, d);
      if (ball_contains(NonisotropicBall(zeta, d1), xi)) CHECK(ball_contains(NonisotropicBall(zeta, d2), xi));
    }
    double prev = 0.0;
    for (double delta = 0.05; delta <= 2.0; delta += 0.05) {
      const double s = sigma_of_ball(delta, d);
      CHECK(s >= prev);
      prev = s;
    }
  }
}

TEST_CASE("window nesting in the depth") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t d : {1, 2}) {
    const NonisotropicBall q(random_sphere_point(rng, d), 0.7);
    for (int i = 0; i < 3000; ++i) {
      double h1 = u(rng), h2 = u(rng);
      if (h1 > h2) std::swap(h1, h2);
      if (h1 == 0.0) continue;
      const auto z = random_sphere_point(rng, d).scaled(u(rng));
      if (window_contains(CarlesonWindow(q, h1), z)) CHECK(window_contains(CarlesonWindow(q, h2), z));
    }
  }
}

TEST_CASE("ball intersection agrees with brute force on the circle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), rad(0.05, 1.5);
  for (int t = 0; t < 300; ++t) {
    const NonisotropicBall a(on_circle(ang(rng)), rad(rng)), b(on_circle(ang(rng)), rad(rng));
    bool common = false;
    for (int k = 0; k < 20000 && !common; ++k) {
      const auto xi = on_circle(2.0 * std::numbers::pi * k / 20000.0);
      common = ball_contains(a, xi) && ball_contains(b, xi);
    }
    // A brute-force hit proves intersection; the exact test may only add tangential cases.
    if (common) CHECK(balls_intersect(a, b));
  }
}

TEST_CASE("greedy packing: one ball for the full circle") {
  const NonisotropicBall q(SpherePoint::basis(1), 2.0);
  const auto pk = greedy_packing(q, 2.0 - 1e-3);
  CHECK(pk.balls.size() == 1);
  CHECK(pk.covers());
}

TEST_CASE("greedy packing: Q(1, 0.5), h = 0.1 against a membership grid") {
  const NonisotropicBall q(SpherePoint::basis(1), 0.5);
  const auto pk = greedy_packing(q, 0.1);
  REQUIRE(pk.balls.size() >= 2);
  const NonisotropicBall twice(q.center(), 1.0);
  for (const auto& b : pk.balls) CHECK(ball_inside(b, twice));
  // 10^4 points of Q, uniform in angle over its arc.
  const double half = 2.0 * std::asin(0.25);
  std::size_t uncovered = 0, doubly = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto xi = on_circle(-half + 2.0 * half * (k + 0.5) / 10000.0);
    REQUIRE(ball_contains(q, xi));
    std::size_t in = 0;
    bool covered = false;
    for (const auto& b : pk.balls) {
      in += ball_contains(b, xi);
      covered = covered || ball_contains(NonisotropicBall(b.center(), 2.0 * b.delta()), xi);
    }
    uncovered += !covered;
    doubly += in > 1;
  }
  CHECK(uncovered == 0);
  CHECK(doubly == 0);
  for (std::size_t i = 0; i < pk.balls.size(); ++i)
    for (std::size_t j = i + 1; j < pk.balls.size(); ++j) CHECK_FALSE(balls_intersect(pk.balls[i], pk.balls[j]));
}

TEST_CASE("greedy packing in d = 2 is disjoint and inside 2Q") {
  std::mt19937_64 rng(41);
  const NonisotropicBall q(random_sphere_point(rng, 2), 0.6);
  const auto pk = greedy_packing(q, 0.4, 7);
  REQUIRE_FALSE(pk.balls.empty());
  const NonisotropicBall twice(q.center(), 1.2);
  for (std::size_t i = 0; i < pk.balls.size(); ++i) {
    CHECK(ball_inside(pk.balls[i], twice));
    for (std::size_t j = i + 1; j < pk.balls.size(); ++j) CHECK_FALSE(balls_intersect(pk.balls[i], pk.balls[j]));
  }
  CHECK(pk.covers());
}

TEST_CASE("greedy packing rejects h >= delta") {
  const NonisotropicBall q(SpherePoint::basis(2), 0.5);
  CHECK_THROWS_AS(greedy_packing(q, 0.5), std::domain_error);
  CHECK_THROWS_AS(greedy_packing(q, 0.0), std::domain_error);
}

TEST_CASE("unitary frame has zeta as first column and is unitary") {
  std::mt19937_64 rng(8);
  for (std::size_t d : {1, 2, 3, 4}) {
    const auto z = random_sphere_point(rng, d);
    const auto u = unitary_frame(z);
    for (std::size_t i = 0; i < d; ++i) CHECK(std::abs(u[i * d] - z[i]) < 1e-14);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        Complex s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += u[i * d + a] * std::conj(u[i * d + b]);
        CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-12);
      }
  }
}
