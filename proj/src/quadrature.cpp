#include "rcm/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "rcm/gauss_legendre.hpp"

namespace rcm {

std::string to_string(SphereScheme scheme) {
  switch (scheme) {
    case SphereScheme::uniform_angle:
      return "uniform-angle";
    case SphereScheme::torus_product:
      return "torus-product";
    case SphereScheme::monte_carlo:
      return "monte-carlo";
  }
  return "unknown";
}

SphereScheme default_scheme(std::size_t d) {
  if (d == 1) return SphereScheme::uniform_angle;
  if (d == 2) return SphereScheme::torus_product;
  return SphereScheme::monte_carlo;
}

SphereGrid sphere_grid(std::size_t d, std::size_t resolution, SphereScheme scheme,
                       std::uint64_t seed) {
  if (d == 0) throw std::domain_error("sphere_grid: d must be >= 1");
  if (resolution < 4) throw std::domain_error("sphere_grid: resolution must be >= 4");
  SphereGrid g;
  g.dim_ = d;
  g.resolution_ = resolution;
  g.scheme_ = scheme;
  g.seed_ = seed;
  const double two_pi = 2.0 * std::numbers::pi;

  switch (scheme) {
    case SphereScheme::uniform_angle: {
      if (d != 1) throw std::domain_error("sphere_grid: uniform-angle rule needs d = 1");
      g.coords_.reserve(resolution);
      for (std::size_t i = 0; i < resolution; ++i)
        g.coords_.push_back(
            std::polar(1.0, two_pi * static_cast<double>(i) / static_cast<double>(resolution)));
      g.weights_.assign(resolution, 1.0 / static_cast<double>(resolution));
      break;
    }
    case SphereScheme::torus_product: {
      if (d != 2) throw std::domain_error("sphere_grid: torus-product rule needs d = 2");
      // zeta = (e^{i phi1} cos t, e^{i phi2} sin t); d sigma = sin(2t) dt dphi1 dphi2 / (4 pi^2).
      const auto rule = gauss_legendre(resolution, 0.0, std::numbers::pi / 2.0);
      const std::size_t n = resolution;
      g.coords_.reserve(2 * n * n * n);
      g.weights_.reserve(n * n * n);
      double total = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        const double t = rule.nodes[a];
        const double wt = rule.weights[a] * std::sin(2.0 * t) / static_cast<double>(n * n);
        for (std::size_t b = 0; b < n; ++b) {
          const double phi1 = two_pi * static_cast<double>(b) / static_cast<double>(n);
          for (std::size_t c = 0; c < n; ++c) {
            const double phi2 = two_pi * static_cast<double>(c) / static_cast<double>(n);
            g.coords_.push_back(std::polar(std::cos(t), phi1));
            g.coords_.push_back(std::polar(std::sin(t), phi2));
            g.weights_.push_back(wt);
            total += wt;
          }
        }
      }
      for (auto& w : g.weights_) w /= total;
      break;
    }
    case SphereScheme::monte_carlo: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      g.coords_.reserve(d * resolution);
      std::vector<Complex> v(d);
      for (std::size_t i = 0; i < resolution; ++i) {
        double n2 = 0.0;
        do {
          n2 = 0.0;
          for (auto& x : v) {
            x = Complex(gauss(rng), gauss(rng));
            n2 += std::norm(x);
          }
        } while (n2 == 0.0);
        const double n = std::sqrt(n2);
        for (const auto& x : v) g.coords_.push_back(x / n);
      }
      g.weights_.assign(resolution, 1.0 / static_cast<double>(resolution));
      break;
    }
  }
  return g;
}

SphereGrid sphere_grid(std::size_t d, std::size_t resolution, std::uint64_t seed) {
  return sphere_grid(d, resolution, default_scheme(d), seed);
}

SphereGrid refine(const SphereGrid& grid) {
  return sphere_grid(grid.dim(), 2 * grid.resolution(), grid.scheme(), grid.seed());
}

namespace {

[[noreturn]] void non_finite_at(const SphereGrid& grid, std::size_t i) {
  std::ostringstream os;
  os << "integration: non-finite integrand at node " << i << " (";
  const auto z = grid.node(i);
  for (std::size_t k = 0; k < z.size(); ++k)
    os << (k ? ", " : "") << z[k].real() << (z[k].imag() < 0 ? "" : "+") << z[k].imag() << "i";
  os << ")";
  throw std::domain_error(os.str());
}

}  // namespace

Complex integrate_sphere(const SphereFunction<Complex>& f, const SphereGrid& grid) {
  KahanSum re, im;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex v = f(grid.node(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) non_finite_at(grid, i);
    re.add(grid.weight(i) * v.real());
    im.add(grid.weight(i) * v.imag());
  }
  return {re.value(), im.value()};
}

double integrate_sphere_real(const SphereFunction<double>& f, const SphereGrid& grid) {
  KahanSum s;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid.node(i));
    if (!std::isfinite(v)) non_finite_at(grid, i);
    s.add(grid.weight(i) * v);
  }
  return s.value();
}

RadialRule::RadialRule(std::size_t d, double depth, std::size_t nodes) : dim_(d), depth_(depth) {
  if (d == 0) throw std::domain_error("RadialRule: d must be >= 1");
  if (!(depth > 0.0) || depth > 1.0) throw std::domain_error("RadialRule: depth must lie in (0, 1]");
  if (nodes == 0) throw std::domain_error("RadialRule: need at least one node");
  const auto rule = gauss_legendre(nodes, 1.0 - depth, 1.0);
  nodes_ = rule.nodes;
  weights_.resize(nodes);
  const double two_d = 2.0 * static_cast<double>(d);
  for (std::size_t j = 0; j < nodes; ++j)
    weights_[j] = rule.weights[j] * two_d * std::pow(nodes_[j], two_d - 1.0);
}

double RadialRule::shell_mass() const {
  return 1.0 - std::pow(1.0 - depth_, 2.0 * static_cast<double>(dim_));
}

Complex integrate_window(const SphereFunction<Complex>& f, const CarlesonWindow& window,
                         const SphereGrid& grid, const RadialRule& radial) {
  if (grid.dim() != window.ball().dim() || radial.dim() != grid.dim())
    throw std::domain_error("integrate_window: dimension mismatch");
  if (std::abs(radial.depth() - window.depth()) > 1e-15)
    throw std::domain_error("integrate_window: radial rule depth differs from window depth");
  const std::size_t d = grid.dim();
  const auto& q = window.ball();
  KahanSum re, im;
  std::vector<Complex> z(d);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.node(i);
    if (!q.contains(xi)) continue;
    for (std::size_t j = 0; j < radial.size(); ++j) {
      const double r = radial.nodes()[j];
      for (std::size_t k = 0; k < d; ++k) z[k] = r * xi[k];
      const Complex v = f(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) non_finite_at(grid, i);
      const double w = grid.weight(i) * radial.weights()[j];
      re.add(w * v.real());
      im.add(w * v.imag());
    }
  }
  return {re.value(), im.value()};
}

}  // namespace rcm
