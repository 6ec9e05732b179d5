#include "doctest.h"

#include <cmath>
#include <limits>
#include <numbers>

#include "rcm/gauss_legendre.hpp"
#include "rcm/quadrature.hpp"

using namespace rcm;

TEST_CASE("uniform grid weights and normalization") {
  const auto g = sphere_grid(1, 37);
  CHECK(g.size() == 37);
  for (double w : g.weights()) CHECK(w == doctest::Approx(1.0 / 37.0).epsilon(1e-15));
  for (std::size_t d : {1, 2, 3, 5}) {
    const auto grid = sphere_grid(d, 16, 4);
    CHECK(integrate_sphere_real([](CoordSpan) { return 1.0; }, grid) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(euclidean_norm(grid.node(i)) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("schemes and resolution checks") {
  CHECK(default_scheme(1) == SphereScheme::uniform_angle);
  CHECK(default_scheme(2) == SphereScheme::torus_product);
  CHECK(default_scheme(3) == SphereScheme::monte_carlo);
  CHECK(sphere_grid(2, 8).size() == 512);
  CHECK_THROWS_AS(sphere_grid(1, 3), std::domain_error);
  CHECK_THROWS_AS(sphere_grid(3, 8, SphereScheme::torus_product), std::domain_error);
}

TEST_CASE("second moment |zeta_1|^2 integrates to 1/d") {
  const auto torus = sphere_grid(2, 12);
  CHECK(integrate_sphere_real([](CoordSpan z) { return std::norm(z[0]); }, torus) == doctest::Approx(0.5).epsilon(1e-13));
  for (std::size_t d : {2, 3}) {
    const std::size_t n = 200000;
    const auto mc = sphere_grid(d, n, SphereScheme::monte_carlo, 13);
    double m = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(mc.node(i)[0]);
      m += v / n;
      m2 += v * v / n;
    }
    const double se = std::sqrt((m2 - m * m) / n);
    CHECK(std::abs(m - 1.0 / d) <= 4.0 * se);
  }
  // Fourth moment oracle: int |zeta_1|^4 = 2 / (d (d + 1)).
  CHECK(integrate_sphere_real([](CoordSpan z) { return std::pow(std::norm(z[0]), 2); }, torus) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("integrate_sphere examples on the circle") {
  const auto g = sphere_grid(1, 64);
  CHECK(std::abs(integrate_sphere([](CoordSpan) { return Complex(2.0, -1.0); }, g) - Complex(2.0, -1.0)) < 1e-14);
  CHECK(std::abs(integrate_sphere([](CoordSpan z) { return z[0]; }, g)) < 1e-12);
  CHECK(integrate_sphere_real([](CoordSpan z) { return 1.0 / std::norm(1.0 - 0.5 * z[0]); }, g) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("spectral accuracy of the 512-node rule against the geometric series") {
  const auto g = sphere_grid(1, 512);
  for (double r : {0.1, 0.5, 0.75, 0.9}) {
    for (double phase : {0.0, 1.3}) {
      const Complex w = std::polar(r, phase);
      double series = 0.0;  // sum_n |w|^{2n}
      for (int n = 0; n < 2000; ++n) series += std::pow(r, 2 * n);
      const double q = integrate_sphere_real([&](CoordSpan z) { return 1.0 / std::norm(1.0 - w * z[0]); }, g);
      CHECK(std::abs(q - series) <= 1e-10 * series);
    }
  }
}

TEST_CASE("non-finite integrands are reported with the node") {
  const auto g = sphere_grid(1, 8);
  try {
    integrate_sphere_real([](CoordSpan z) { return 1.0 / std::abs(1.0 - z[0]); }, g);
    FAIL("expected an exception");
  } catch (const std::domain_error& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("radial rule normalization") {
  for (std::size_t d : {1, 2, 3}) {
    const RadialRule full(d, 1.0, 20);
    double s = 0.0;
    for (double w : full.weights()) s += w;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    const RadialRule shell(d, 0.2, 12);
    s = 0.0;
    for (std::size_t j = 0; j < shell.size(); ++j) {
      CHECK(shell.weights()[j] > 0.0);
      if (j) CHECK(shell.nodes()[j] > shell.nodes()[j - 1]);
      CHECK(shell.nodes()[j] > 0.8);
      CHECK(shell.nodes()[j] < 1.0);
      s += shell.weights()[j];
    }
    CHECK(s == doctest::Approx(1.0 - std::pow(0.8, 2.0 * d)).epsilon(1e-13));
    CHECK(shell.shell_mass() == doctest::Approx(1.0 - std::pow(0.8, 2.0 * d)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(RadialRule(1, 0.0, 4), std::domain_error);
  CHECK_THROWS_AS(RadialRule(1, 1.5, 4), std::domain_error);
}

TEST_CASE("integrate_window of constants") {
  for (std::size_t d : {1, 2}) {
    const auto g = sphere_grid(d, d == 1 ? 256 : 16);
    const NonisotropicBall all(SpherePoint::basis(d), 2.0);
    const RadialRule r1(d, 1.0, 16);
    CHECK(integrate_window([](CoordSpan) { return Complex(1.0); }, CarlesonWindow(all, 1.0), g, r1).real() ==
          doctest::Approx(1.0).epsilon(1e-12));
    const NonisotropicBall q(SpherePoint::basis(d), 0.6);
    double s = 0.0;  // node-indicator surface mass of Q
    for (std::size_t i = 0; i < g.size(); ++i) s += q.contains(g.node(i)) ? g.weight(i) : 0.0;
    const RadialRule rh(d, 0.3, 10);
    CHECK(integrate_window([](CoordSpan) { return Complex(1.0); }, CarlesonWindow(q, 0.3), g, rh).real() ==
          doctest::Approx(s * (1.0 - std::pow(0.7, 2.0 * d))).epsilon(1e-12));
    CHECK_THROWS_AS(integrate_window([](CoordSpan) { return Complex(1.0); }, CarlesonWindow(q, 0.4), g, rh),
                    std::domain_error);
  }
}

TEST_CASE("volume moment through polar quadrature") {
  // int_B |z|^2 d nu = 2d / (2d + 2) = d / (d + 1).
  for (std::size_t d : {1, 2}) {
    const auto g = sphere_grid(d, 16);
    const CarlesonWindow whole(NonisotropicBall(SpherePoint::basis(d), 2.0), 1.0);
    const RadialRule r(d, 1.0, 12);
    const auto v = integrate_window([](CoordSpan z) { return Complex(std::pow(euclidean_norm(z), 2)); }, whole, g, r);
    CHECK(v.real() == doctest::Approx(double(d) / (d + 1.0)).epsilon(1e-13));
  }
}

TEST_CASE("refinement doubles resolution and keeps Monte Carlo prefixes") {
  const auto g = sphere_grid(1, 50);
  const auto r = refine(g);
  CHECK(r.size() == 100);
  CHECK(integrate_sphere_real([](CoordSpan) { return 1.0; }, r) == doctest::Approx(1.0));
  const auto mc = sphere_grid(3, 100, SphereScheme::monte_carlo, 77);
  const auto mc2 = refine(mc);
  REQUIRE(mc2.size() == 200);
  CHECK(mc2.seed() == 77);
  for (std::size_t i = 0; i < mc.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k) CHECK(mc.node(i)[k] == mc2.node(i)[k]);
  CHECK(refine(sphere_grid(2, 8)).size() == 16 * 16 * 16);
}

TEST_CASE("refinement estimates of a smooth integrand are Cauchy") {
  auto f = [](CoordSpan z) { return std::exp(z[0].real()) * (1.0 + std::norm(z[1])); };
  auto g = sphere_grid(2, 6);
  double prev = integrate_sphere_real(f, g), diff_prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 3; ++k) {
    g = refine(g);
    const double v = integrate_sphere_real(f, g);
    const double diff = std::abs(v - prev);
    CHECK(diff < 1e-3);
    CHECK(diff <= std::max(diff_prev, 1e-12));
    diff_prev = diff;
    prev = v;
  }
}

TEST_CASE("Monte Carlo error decays like n^{-1/2}") {
  // Mean absolute error of |zeta_1|^2 over 40 seeds at n = 10^2 .. 10^5.
  std::vector<double> logn, loge;
  for (std::size_t n : {100, 1000, 10000, 100000}) {
    double err = 0.0;
    for (std::uint64_t s = 1; s <= 40; ++s) {
      const auto g = sphere_grid(3, n, SphereScheme::monte_carlo, s);
      err += std::abs(integrate_sphere_real([](CoordSpan z) { return std::norm(z[0]); }, g) - 1.0 / 3.0) / 40.0;
    }
    logn.push_back(std::log(double(n)));
    loge.push_back(std::log(err));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    mx += logn[i] / logn.size();
    my += loge[i] / logn.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < logn.size(); ++i) {
    sxy += (logn[i] - mx) * (loge[i] - my);
    sxx += (logn[i] - mx) * (logn[i] - mx);
  }
  const double slope = sxy / sxx;
  CHECK(slope > -0.65);
  CHECK(slope < -0.35);
}

TEST_CASE("Gauss-Legendre exactness") {
  const auto r = gauss_legendre(5, 0.0, 2.0);
  double s = 0.0;
  for (std::size_t i = 0; i < 5; ++i) s += r.weights[i] * std::pow(r.nodes[i], 9);
  CHECK(s == doctest::Approx(std::pow(2.0, 10) / 10.0).epsilon(1e-13));
}

TEST_CASE("compensated summation") {
  KahanSum k;
  k.add(1.0);
  for (int i = 0; i < 1000000; ++i) k.add(1e-16);
  CHECK(k.value() == doctest::Approx(1.0 + 1e-10).epsilon(1e-15));
}
