#include "rcm/hardy_kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rcm {

Exponents::Exponents(double p, std::size_t d) : p_(p), d_(d) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::domain_error("Exponents: p must lie in (1, inf)");
  if (d == 0) throw std::domain_error("Exponents: d must be >= 1");
  q_ = p / (p - 1.0);
}

namespace {

void require_interior(const BallPoint& w, const char* what) {
  if (!(w.norm() < 1.0)) throw std::domain_error(std::string(what) + ": need |w| < 1");
}

Complex int_power(Complex base, std::size_t n) {
  Complex out{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) out *= base;
  return out;
}

}  // namespace

Complex cauchy_kernel(const BallPoint& w, CoordSpan z) {
  require_interior(w, "cauchy_kernel");
  return 1.0 / int_power(1.0 - inner(z, w.coords()), w.dim());
}

double kernel_norm(const BallPoint& w, const Exponents& e) {
  require_interior(w, "kernel_norm");
  const double d = static_cast<double>(e.d());
  return std::pow(1.0 - w.norm() * w.norm(), -d / e.q());
}

double kernel_norm_exact(const BallPoint& w, const Exponents& e) {
  require_interior(w, "kernel_norm_exact");
  const double x = w.norm() * w.norm();
  const double d = static_cast<double>(e.d());
  if (e.p() == 2.0) return std::pow(1.0 - x, -d / 2.0);
  if (1.0 - x < 1e-7) throw std::domain_error("kernel_norm_exact: |w| too close to 1 for the series");
  const double s = e.p() * d / 2.0;
  double term = 1.0, sum = 1.0;
  for (std::size_t n = 0; n < 100'000'000; ++n) {
    const double nn = static_cast<double>(n);
    term *= (s + nn) * (s + nn) / ((d + nn) * (nn + 1.0)) * x;
    sum += term;
    if (nn > 2.0 * s && term < 1e-17 * sum) break;
  }
  return std::pow(sum, 1.0 / e.p());
}

double kernel_norm_quadrature(const BallPoint& w, const Exponents& e, const SphereGrid& grid) {
  require_interior(w, "kernel_norm_quadrature");
  if (grid.dim() != w.dim()) throw std::domain_error("kernel_norm_quadrature: dimension mismatch");
  const double p = e.p();
  const double integral = integrate_sphere_real(
      [&](CoordSpan z) { return std::pow(std::abs(cauchy_kernel(w, z)), p); }, grid);
  return std::pow(integral, 1.0 / p);
}

TestFunction TestFunction::kernels(std::size_t d, std::vector<Complex> coeffs,
                                   std::vector<BallPoint> poles) {
  if (coeffs.size() != poles.size() || poles.empty())
    throw std::domain_error("TestFunction::kernels: need matching nonempty coefficient and pole lists");
  for (const auto& w : poles) {
    if (w.dim() != d) throw std::domain_error("TestFunction::kernels: pole dimension mismatch");
    require_interior(w, "TestFunction::kernels");
  }
  for (const auto& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw std::domain_error("TestFunction::kernels: non-finite coefficient");
  TestFunction f;
  f.dim_ = d;
  f.coeffs_ = std::move(coeffs);
  f.poles_ = std::move(poles);
  return f;
}

TestFunction TestFunction::polynomial(std::size_t d, std::vector<Monomial> terms) {
  if (d == 0 || terms.empty()) throw std::domain_error("TestFunction::polynomial: empty polynomial");
  for (const auto& t : terms) {
    if (t.powers.size() != d) throw std::domain_error("TestFunction::polynomial: multi-index size mismatch");
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      throw std::domain_error("TestFunction::polynomial: non-finite coefficient");
  }
  TestFunction f;
  f.dim_ = d;
  f.terms_ = std::move(terms);
  return f;
}

Complex TestFunction::operator()(CoordSpan z) const {
  if (z.size() != dim_) throw std::domain_error("TestFunction: dimension mismatch");
  Complex s{0.0, 0.0};
  if (!poles_.empty()) {
    for (std::size_t j = 0; j < poles_.size(); ++j) s += coeffs_[j] * cauchy_kernel(poles_[j], z);
    return s;
  }
  for (const auto& t : terms_) {
    Complex m = t.coeff;
    for (std::size_t k = 0; k < dim_; ++k) m *= int_power(z[k], t.powers[k]);
    s += m;
  }
  return s;
}

TestFunction TestFunction::scaled(Complex c) const {
  TestFunction f = *this;
  for (auto& x : f.coeffs_) x *= c;
  for (auto& t : f.terms_) t.coeff *= c;
  if (f.known_norm_) *f.known_norm_ *= std::abs(c);
  return f;
}

TestFunction TestFunction::with_known_norm(double p, double norm) const {
  if (!(norm > 0.0)) throw std::domain_error("TestFunction: known norm must be positive");
  TestFunction f = *this;
  f.known_norm_ = norm;
  f.known_p_ = p;
  return f;
}

std::optional<double> TestFunction::known_norm(double p) const {
  if (known_norm_ && known_p_ == p) return known_norm_;
  return std::nullopt;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (!poles_.empty()) {
    os << "kernels[";
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      os << (j ? "; " : "") << "(" << coeffs_[j].real() << "," << coeffs_[j].imag() << ")@(";
      const auto w = poles_[j].coords();
      for (std::size_t k = 0; k < w.size(); ++k)
        os << (k ? "," : "") << w[k].real() << (w[k].imag() < 0 ? "" : "+") << w[k].imag() << "i";
      os << ")";
    }
    os << "]";
    return os.str();
  }
  os << "poly[";
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    os << (j ? " + " : "") << "(" << terms_[j].coeff.real() << "," << terms_[j].coeff.imag() << ")";
    for (std::size_t k = 0; k < dim_; ++k)
      if (terms_[j].powers[k]) os << "z" << k + 1 << "^" << terms_[j].powers[k];
  }
  os << "]";
  return os.str();
}

TestFunction normalized_kernel(const BallPoint& w, const Exponents& e) {
  if (w.dim() != e.d()) throw std::domain_error("normalized_kernel: dimension mismatch");
  const double n = kernel_norm_exact(w, e);
  return TestFunction::kernels(w.dim(), {Complex(1.0 / n, 0.0)}, {w}).with_known_norm(e.p(), 1.0);
}

double poisson_kernel(const BallPoint& w, CoordSpan xi) {
  require_interior(w, "poisson_kernel");
  const double d = static_cast<double>(w.dim());
  const double num = std::pow(1.0 - w.norm() * w.norm(), d);
  return num / std::pow(std::norm(1.0 - inner(w.coords(), xi)), d);
}

double phi_h(CoordSpan z, const NonisotropicBall& q, double h, const Exponents& e,
             const SphereGrid& grid, const RadialRule& radial) {
  if (z.size() != q.dim() || e.d() != q.dim()) throw std::domain_error("phi_h: dimension mismatch");
  if (euclidean_norm(z) > 1.0 + kGeometryTol) throw std::domain_error("phi_h: z outside the closed ball");
  const CarlesonWindow window(q, h);
  const double d = static_cast<double>(e.d());
  const double a = e.p() * d - d, b = e.p() * d;
  const Complex total = integrate_window(
      [&](CoordSpan w) {
        const double w2 = std::norm(euclidean_norm(w));
        return Complex(std::pow(1.0 - w2, a) / std::pow(std::abs(1.0 - inner(z, w)), b), 0.0);
      },
      window, grid, radial);
  return total.real() / h;
}

namespace {

using boost::math::quadrature::gauss_kronrod;

// int over psi in [lo, hi] (a subset of [-pi, pi]) of |1 - rho e^{i psi}|^{-p}. The map
// tan(psi/2) = kappa tan(v/2), kappa = (1 - rho)/(1 + rho), turns the p = 2 kernel into
// the constant 1/(1 - rho^2) and leaves a smooth factor for other p.
double arc_kernel_integral(double rho, double lo, double hi, double p, double tol) {
  if (hi <= lo) return 0.0;
  if (rho < 0.5) {
    auto f = [&](double psi) { return std::pow(std::abs(1.0 - std::polar(rho, psi)), -p); };
    return gauss_kronrod<double, 31>::integrate(f, lo, hi, 15, tol);
  }
  const double kappa = (1.0 - rho) / (1.0 + rho);
  auto to_v = [&](double psi) {
    if (psi >= std::numbers::pi) return std::numbers::pi;
    if (psi <= -std::numbers::pi) return -std::numbers::pi;
    return 2.0 * std::atan(std::tan(psi / 2.0) / kappa);
  };
  const double expo = (2.0 - p) / 2.0;
  auto g = [&](double v) {
    const double t = std::tan(v / 2.0);
    const double t2 = t * t;
    double ratio;  // (1 + T^2)/(1 + kappa^2 T^2), stable for large T
    if (t2 > 1e8) ratio = (1.0 / t2 + 1.0) / (1.0 / t2 + kappa * kappa);
    else ratio = (1.0 + t2) / (1.0 + kappa * kappa * t2);
    return std::pow((1.0 - rho) * (1.0 - rho) * ratio, expo);
  };
  const double v_lo = to_v(lo), v_hi = to_v(hi);
  double total = 0.0;
  // Split at the transition |kappa T| ~ 1 so the adaptive rule sees smooth pieces.
  const double v_knee = 2.0 * std::atan(1.0 / kappa);
  double cuts[] = {v_lo, -v_knee, 0.0, v_knee, v_hi};
  double prev = v_lo;
  for (double c : cuts) {
    if (c <= prev || c > v_hi) continue;
    total += gauss_kronrod<double, 31>::integrate(g, prev, c, 15, tol);
    prev = c;
  }
  if (v_hi > prev) total += gauss_kronrod<double, 31>::integrate(g, prev, v_hi, 15, tol);
  return total / (1.0 - rho * rho);
}

}  // namespace

double phi_h_disk(Complex z, const NonisotropicBall& q, double h, const Exponents& e, double tol) {
  if (q.dim() != 1 || e.d() != 1) throw std::domain_error("phi_h_disk: needs d = 1");
  if (!(h > 0.0) || h > 1.0) throw std::domain_error("phi_h_disk: h must lie in (0, 1]");
  const double rz = std::abs(z);
  if (rz > 1.0 + kGeometryTol) throw std::domain_error("phi_h_disk: z outside the closed disk");
  const double p = e.p();
  const double centre = std::arg(q.center()[0]);
  const double half = q.is_full_sphere() ? std::numbers::pi : 2.0 * std::asin(q.delta() / 2.0);
  const double phase = rz > 0.0 ? std::arg(z) : 0.0;
  // |1 - z r e^{-i theta}| = |1 - r|z| e^{i psi}| with psi = theta - arg z.
  double lo = centre - half - phase;
  lo = std::remainder(lo, 2.0 * std::numbers::pi);
  const double width = 2.0 * half;
  auto angular = [&](double r) {
    const double rho = std::min(rz, 1.0) * r;
    double hi = lo + width;
    double s = 0.0;
    if (hi <= std::numbers::pi) {
      s = arc_kernel_integral(rho, lo, hi, p, tol);
    } else {
      s = arc_kernel_integral(rho, lo, std::numbers::pi, p, tol) +
          arc_kernel_integral(rho, -std::numbers::pi, hi - 2.0 * std::numbers::pi, p, tol);
    }
    return s / (2.0 * std::numbers::pi);
  };
  auto radial = [&](double r) { return 2.0 * r * std::pow(1.0 - r * r, p - 1.0) * angular(r); };
  return gauss_kronrod<double, 31>::integrate(radial, 1.0 - h, 1.0, 12, tol) / h;
}

double hp_norm(const TestFunction& f, const Exponents& e, const SphereGrid& grid) {
  if (f.dim() != grid.dim()) throw std::domain_error("hp_norm: dimension mismatch");
  const double p = e.p();
  const double integral =
      integrate_sphere_real([&](CoordSpan z) { return std::pow(std::abs(f(z)), p); }, grid);
  return std::pow(integral, 1.0 / p);
}

RadialLimit boundary_radial_limit(const std::function<Complex(CoordSpan)>& f,
                                  const SpherePoint& zeta, std::size_t max_steps, double tol) {
  RadialLimit out;
  const std::size_t d = zeta.dim();
  std::vector<Complex> z(d);
  auto at = [&](std::size_t k) {
    const double r = 1.0 - std::ldexp(1.0, -static_cast<int>(k));
    for (std::size_t i = 0; i < d; ++i) z[i] = r * zeta[i];
    return f(z);
  };
  Complex prev_value = at(1);
  Complex prev_extrap{};
  for (std::size_t k = 2; k <= max_steps; ++k) {
    const Complex value = at(k);
    out.steps = k;
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) return out;
    // Error of a function smooth up to the sphere is O(2^{-k}); one Richardson step.
    const Complex extrap = 2.0 * value - prev_value;
    if (k >= 3 && std::abs(extrap - prev_extrap) <= tol * std::max(1.0, std::abs(extrap))) {
      out.value = extrap;
      out.converged = true;
      return out;
    }
    prev_value = value;
    prev_extrap = extrap;
    out.value = extrap;
  }
  return out;
}

double poisson_mean(const std::function<Complex(CoordSpan)>& f, const NonisotropicBall& q,
                    CoordSpan z, double r, const SphereGrid& grid) {
  if (!(r > 0.0) || !(r < 1.0)) throw std::domain_error("poisson_mean: r must lie in (0, 1)");
  const std::size_t d = grid.dim();
  const double dd = static_cast<double>(d);
  const double num = std::pow(1.0 - r * r, dd);
  std::vector<Complex> x(d);
  return integrate_sphere_real(
      [&](CoordSpan xi) {
        if (!q.contains(xi)) return 0.0;
        for (std::size_t k = 0; k < d; ++k) x[k] = r * xi[k];
        return std::abs(f(x)) * num / std::pow(std::norm(1.0 - inner(z, x)), dd);
      },
      grid);
}

}  // namespace rcm
