#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "rcm/ball_geometry.hpp"
#include "rcm/hardy_kernels.hpp"
#include "rcm/measures.hpp"

using namespace rcm;
using nlohmann::json;

namespace {

std::vector<Complex> pt(std::initializer_list<Complex> c) { return std::vector<Complex>(c); }

MeasureQuadrature quad1(std::size_t n = 1024) { return {sphere_grid(1, n), 24}; }

}  // namespace

TEST_CASE("density expressions evaluate like their closed forms") {
  const auto z = pt({Complex(0.3, -0.4), Complex(0.1, 0.5)});
  const double r = euclidean_norm(z);
  struct Case {
    const char* src;
    double expect;
  } cases[] = {
      {"1 + re(1)/2", 1.0 + 0.15},
      {"2^3^2", 512.0},
      {"-2^2 + 5", 9.0},  // unary minus binds tighter than ^
      {"r^2", r * r},
      {"absz(2)", std::abs(z[1])},
      {"im(1) * im(2) + 1", 1.0 - 0.2},
      {"absip([1, i])", std::abs(z[0] * 1.0 + z[1] * Complex(0, -1))},
      {"sqrt(4) * exp(0) + abs(-3)", 5.0},
      {"step(re(1)) + step(-re(1) - 1)", 1.0},
      {"pi / pi", 1.0},
      {"(1 + 2) * (3 - 1) / 4", 1.5},
  };
  for (const auto& c : cases) {
    CAPTURE(c.src);
    CHECK(DensityExpr::parse(c.src, 2)(z) == doctest::Approx(c.expect).epsilon(1e-14));
  }
  CHECK(DensityExpr::parse("3.5", 2).constant_value().value() == 3.5);
  CHECK_FALSE(DensityExpr::parse("r", 2).constant_value());
}

TEST_CASE("ind selects a nonisotropic ball of the radial projection") {
  const auto e = DensityExpr::parse("ind([1], 0.5)", 1);
  CHECK(e(pt({std::polar(0.5, 0.1)})) == 1.0);
  CHECK(e(pt({std::polar(1.0, 2.0)})) == 0.0);
  CHECK(e(pt({0.0})) == 0.0);
  const auto e2 = DensityExpr::parse("ind([2, 0], 1)", 2);  // center normalized to e1
  CHECK(e2(SpherePoint::basis(2, 1).coords()) == 1.0);
}

TEST_CASE("density parser errors") {
  for (const char* bad : {"", "1 +", "(1 + 2", "re(3)", "re(0)", "foo(1)", "ind([1, 2], 0.5)", "absip([])",
                          "1 2", "re(1.5)", "ind([0], 0.5)", "exp(", "[1]"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(DensityExpr::parse(bad, 1), std::invalid_argument);
  }
  try {
    DensityExpr::parse("1 + * 2", 1);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("4") != std::string::npos);  // position of '*'
  }
  const auto neg = DensityExpr::parse("re(1)", 1);
  CHECK_THROWS_AS(neg(pt({-0.5})), std::domain_error);
  CHECK(neg.evaluate_unchecked(pt({-0.5})) == -0.5);
  CHECK_THROWS_AS(DensityExpr::parse("1/r", 1)(pt({0.0})), std::domain_error);
}

TEST_CASE("measure documents") {
  const json doc = json::parse(R"({
    "dimension": 1,
    "interior_atoms": [{"point": [[0.5, 0]], "mass": 2}],
    "interior_density": "r",
    "boundary_density": "1 + re(1)/2",
    "boundary_atoms": [{"point": [[0, 1]], "mass": 0.25}]
  })");
  const auto mu = BallMeasure::from_json(doc);
  CHECK(mu.dim() == 1);
  CHECK(mu.interior_atoms().size() == 1);
  CHECK(mu.boundary_atoms().size() == 1);
  const auto back = BallMeasure::from_json(mu.to_json());
  CHECK(back.to_json() == mu.to_json());
  const auto scaled = BallMeasure::from_json(mu.scaled(2.0).to_json());
  CHECK(scaled.boundary_density_at(pt({1.0})) == doctest::Approx(3.0));
  CHECK(scaled.interior_atoms()[0].mass == 4.0);

  auto reject = [](const char* text) { CHECK_THROWS_AS(BallMeasure::from_json(json::parse(text)), std::invalid_argument); };
  reject(R"({"dimension": 1, "interior_atoms": [{"point": [0.5], "mass": -1}]})");
  reject(R"({"dimension": 1, "interior_atoms": [{"point": [1.5], "mass": 1}]})");
  reject(R"({"dimension": 1, "boundary_density": "1", "colour": "red"})");
  reject(R"({"dimension": 0, "boundary_density": "1"})");
  reject(R"({"dimension": 1, "boundary_atoms": [{"point": [0], "mass": 1}]})");
  reject(R"j({"dimension": 2, "boundary_density": "re(3)"})j");
  reject(R"({"dimension": 2, "interior_atoms": [{"point": [0.5], "mass": 1}]})");

  const auto path = std::filesystem::temp_directory_path() / "rcm_measure_test.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(BallMeasure::load(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(BallMeasure::load("/nonexistent/measure.json"), std::invalid_argument);
}

TEST_CASE("measure of balls") {
  const auto q = quad1();
  const auto sigma = BallMeasure::surface(1);
  const NonisotropicBall b(SpherePoint({std::polar(1.0, 0.7)}), 0.4);
  CHECK(measure_of_ball(sigma, b, q.sphere) == doctest::Approx(grid_sigma(b, q.sphere)).epsilon(1e-15));
  CHECK(grid_sigma(b, q.sphere) == doctest::Approx(sigma_of_ball(0.4, 1)).epsilon(5e-3));
  CHECK(measure_of_ball(BallMeasure::point_mass(BallPoint::origin(1)), b, q.sphere) == 0.0);
  const BallMeasure atom(1, {}, std::nullopt, std::nullopt, {{SpherePoint::basis(1), 1.0}});
  for (double delta : {2.0, 0.5, 1e-3, 1e-9})
    CHECK(measure_of_ball(atom, NonisotropicBall(SpherePoint::basis(1), delta), q.sphere) == 1.0);
}

TEST_CASE("measure of windows") {
  const auto q = quad1();
  const auto e1 = SpherePoint::basis(1);
  const NonisotropicBall b(e1, 0.6);
  const auto sigma = BallMeasure::surface(1);
  for (double h : {1.0, 0.3, 0.01}) {
    const RadialRule radial(1, h, 16);
    CHECK(measure_of_window(sigma, CarlesonWindow(b, h), q.sphere, radial) == doctest::Approx(grid_sigma(b, q.sphere)));
    CHECK(measure_of_window(sigma, CarlesonWindow(b, h, false), q.sphere, radial) == 0.0);
  }
  const auto atom = BallMeasure::point_mass(e1.scaled(0.95));
  for (double h : {0.04, 0.05, 0.2}) {
    const RadialRule radial(1, h, 8);
    CHECK(measure_of_window(atom, CarlesonWindow(b, h), q.sphere, radial) == (h >= 0.05 ? 1.0 : 0.0));
    CHECK(measure_of_window(atom, CarlesonWindow(NonisotropicBall(SpherePoint({-1.0}), 0.6), h), q.sphere, radial) == 0.0);
  }
  // Volume measure: mass (1 - (1-h)^{2d}) of the node-indicator part of Q, linear in h as h -> 0.
  const auto nu = BallMeasure::volume(1);
  for (double h : {0.5, 0.1, 0.01}) {
    const RadialRule radial(1, h, 8);
    const double m = measure_of_window(nu, CarlesonWindow(b, h), q.sphere, radial);
    CHECK(m == doctest::Approx(grid_sigma(b, q.sphere) * (1.0 - std::pow(1.0 - h, 2))).epsilon(1e-12));
    if (h == 0.01) CHECK(m / h == doctest::Approx(2.0 * grid_sigma(b, q.sphere)).epsilon(1e-2));
  }
}

TEST_CASE("integration against measures") {
  const auto q = quad1(512);
  const auto mixed = BallMeasure(1, {{BallPoint({0.3}), 0.7}}, DensityExpr::parse("r", 1), DensityExpr::parse("1 + re(1)/2", 1),
                                 {{SpherePoint({Complex(0, 1)}), 0.25}});
  // total: 0.7 + int r d nu (= 2/3) + 1 + 0.25
  CHECK(total_mass(mixed, q) == doctest::Approx(0.7 + 2.0 / 3.0 + 1.0 + 0.25).epsilon(1e-12));
  CHECK(total_mass(mixed, q) == integrate_measure(mixed, [](CoordSpan) { return 1.0; }, q));
  const BallPoint w0({Complex(0.2, 0.1)});
  const BallPoint w({0.6});
  const Exponents e(3.0, 1);
  const auto v = integrate_abs_power(BallMeasure::point_mass(w0, 1.0), [&](CoordSpan z) { return cauchy_kernel(w, z); }, 3.0, q);
  CHECK(v.value == doctest::Approx(std::pow(std::abs(cauchy_kernel(w, w0.coords())), 3.0)).epsilon(1e-14));
  const auto K = normalized_kernel(w, Exponents(2.0, 1));
  CHECK(integrate_abs_power(BallMeasure::surface(1), [&](CoordSpan z) { return K(z); }, 2.0, q).value ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(integrate_measure(mixed, [](CoordSpan) { return -1.0; }, q), std::domain_error);
}

TEST_CASE("boundary atoms through radial limits") {
  const auto q = quad1(64);
  const BallMeasure atom(1, {}, std::nullopt, std::nullopt, {{SpherePoint::basis(1), 2.0}});
  auto pole = [](CoordSpan z) { return 1.0 / (1.0 - z[0]); };
  const auto inf = integrate_abs_power(atom, pole, 2.0, q, BoundaryEvaluation::radial_limit);
  CHECK(inf.infinite);
  CHECK(inf.note.find("boundary atom") != std::string::npos);
  const BallPoint w({0.5});
  const auto fin = integrate_abs_power(atom, [&](CoordSpan z) { return cauchy_kernel(w, z); }, 2.0, q,
                                       BoundaryEvaluation::radial_limit);
  CHECK_FALSE(fin.infinite);
  CHECK(fin.value == doctest::Approx(8.0).epsilon(1e-6));
}

TEST_CASE("Radon-Nikodym profiles") {
  const auto g = sphere_grid(1, 1 << 16);
  std::vector<SpherePoint> centers{SpherePoint::basis(1), SpherePoint({std::polar(1.0, 2.0)})};
  const std::vector<double> deltas{0.5, 0.1, 0.02};
  const auto t = radon_nikodym_profile(BallMeasure::surface(1, 2.0), centers, deltas, g);
  for (const auto& row : t.ratios)
    for (double v : row) CHECK(v == doctest::Approx(2.0).epsilon(1e-14));
  const BallMeasure atom(1, {}, std::nullopt, std::nullopt, {{SpherePoint::basis(1), 1.0}});
  const auto ta = radon_nikodym_profile(atom, centers, deltas, g);
  for (std::size_t j = 0; j < deltas.size(); ++j)
    CHECK(ta.ratios[0][j] * grid_sigma(NonisotropicBall(centers[0], deltas[j]), g) == doctest::Approx(1.0));
  CHECK(ta.ratios[0][2] > 10.0 * ta.ratios[0][0]);
  const BallMeasure tilt(1, {}, std::nullopt, DensityExpr::parse("1 + re(1)/2", 1), {});
  const auto tt = radon_nikodym_profile(tilt, centers, deltas, g);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double gz = 1.0 + centers[i][0].real() / 2.0;
    CHECK(std::abs(tt.ratios[i][2] - gz) < std::abs(tt.ratios[i][0] - gz) + 1e-12);
    CHECK(tt.ratios[i][2] == doctest::Approx(gz).epsilon(1e-3));
  }
  CHECK_THROWS_AS(radon_nikodym_profile(tilt, centers, {0.1, 0.5}, g), std::domain_error);
}

TEST_CASE("additivity over a greedy packing") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.7, 0.99);
  for (std::size_t d : {1, 2}) {
    const NonisotropicBall q(SpherePoint::basis(d), 0.6);
    const double h = 0.3;
    const auto pk = greedy_packing(q, h);
    // Atoms inside the windows and elsewhere.
    std::vector<InteriorAtom> atoms;
    for (std::size_t j = 0; j < pk.balls.size(); ++j) atoms.push_back({pk.balls[j].center().scaled(0.85), 0.1 + j});
    for (int k = 0; k < 20; ++k) {
      std::vector<Complex> v(d);
      for (auto& c : v) c = {n(rng), n(rng)};
      atoms.push_back({SpherePoint::normalized(v).scaled(u(rng)), 1.0 + k});
    }
    const BallMeasure mu(d, atoms, std::nullopt, std::nullopt, {});
    const auto grid = sphere_grid(d, 8);
    const RadialRule radial(d, h, 8);
    double sum = 0.0;
    for (const auto& b : pk.balls) sum += measure_of_window(mu, CarlesonWindow(b, h), grid, radial);
    double uni = 0.0;
    for (const auto& a : atoms) {
      bool in = false;
      for (const auto& b : pk.balls) in = in || window_contains(CarlesonWindow(b, h), a.point);
      if (in) uni += a.mass;
    }
    CHECK(std::abs(sum - uni) <= 1e-12);
  }
}

TEST_CASE("monotonicity and outer regularity") {
  const auto q = quad1(2048);
  const auto mu = BallMeasure(1, {{BallPoint({0.9}), 0.5}}, DensityExpr::parse("r", 1), DensityExpr::parse("1 + re(1)/2", 1),
                              {{SpherePoint({std::polar(1.0, 0.2)}), 0.3}});
  const auto e1 = SpherePoint::basis(1);
  double prev = 0.0;
  for (double delta : {0.05, 0.1, 0.3, 0.8, 2.0}) {
    const double m = measure_of_ball(mu, NonisotropicBall(e1, delta), q.sphere);
    CHECK(m >= prev);
    prev = m;
  }
  const NonisotropicBall b(e1, 0.3);
  prev = 0.0;
  for (double h : {0.01, 0.05, 0.2, 0.5}) {
    const RadialRule radial(1, h, q.radial_nodes);
    const double m = measure_of_window(mu, CarlesonWindow(b, h), q.sphere, radial);
    CHECK(m >= prev);
    CHECK(measure_of_ball(mu, b, q.sphere) <= m);
    prev = m;
  }
}
