#include "rcm/dbr.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rcm/hardy_kernels.hpp"

namespace rcm {

namespace {

Complex int_power(Complex base, unsigned n) {
  Complex out{1.0, 0.0};
  for (unsigned k = 0; k < n; ++k) out *= base;
  return out;
}

bool finite(Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

SphereGrid sup_check_grid(std::size_t d) {
  if (d == 1) return sphere_grid(1, 8192);
  if (d == 2) return sphere_grid(2, 40);
  return sphere_grid(d, 50000, SphereScheme::monte_carlo, 0xb0b);
}

Complex read_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("symbol: complex values are numbers or [re, im] pairs");
}

nlohmann::json write_complex(Complex c) { return nlohmann::json::array({c.real(), c.imag()}); }

}  // namespace

Symbol Symbol::constant(Complex c, std::size_t d) {
  if (d == 0) throw std::domain_error("Symbol: d must be >= 1");
  if (!finite(c) || !(std::abs(c) < 1.0)) throw std::domain_error("Symbol::constant: need |c| < 1");
  Symbol b;
  b.kind_ = Kind::constant;
  b.dim_ = d;
  b.constant_ = c;
  return b;
}

Symbol Symbol::polynomial(std::size_t d, std::vector<Term> terms) {
  if (d == 0 || terms.empty()) throw std::domain_error("Symbol::polynomial: empty polynomial");
  double l1 = 0.0;
  for (const auto& t : terms) {
    if (t.powers.size() != d) throw std::domain_error("Symbol::polynomial: multi-index size mismatch");
    if (!finite(t.coeff)) throw std::domain_error("Symbol::polynomial: non-finite coefficient");
    l1 += std::abs(t.coeff);
  }
  Symbol b;
  b.kind_ = Kind::polynomial;
  b.dim_ = d;
  b.terms_ = std::move(terms);
  b.certified_ = l1 <= 1.0;
  if (!b.certified_) {
    const auto grid = sup_check_grid(d);
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) sup = std::max(sup, std::abs(b(grid.node(i))));
    if (sup > 1.0 + 1e-10)
      throw std::domain_error("Symbol::polynomial: sup |b| on the sphere is " + std::to_string(sup) + " > 1");
  }
  return b;
}

Symbol Symbol::blaschke(std::vector<Complex> zeros, Complex unimodular) {
  if (std::abs(std::abs(unimodular) - 1.0) > 1e-12)
    throw std::domain_error("Symbol::blaschke: the constant factor must be unimodular");
  for (const auto& a : zeros)
    if (!finite(a) || !(std::abs(a) < 1.0)) throw std::domain_error("Symbol::blaschke: zeros must lie in the open disk");
  Symbol b;
  b.kind_ = Kind::blaschke;
  b.dim_ = 1;
  b.zeros_ = std::move(zeros);
  b.unimodular_ = unimodular;
  return b;
}

Complex Symbol::operator()(CoordSpan z) const {
  if (z.size() != dim_) throw std::domain_error("Symbol: dimension mismatch");
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::polynomial: {
      Complex s{0.0, 0.0};
      for (const auto& t : terms_) {
        Complex m = t.coeff;
        for (std::size_t k = 0; k < dim_; ++k) m *= int_power(z[k], t.powers[k]);
        s += m;
      }
      return s;
    }
    case Kind::blaschke: {
      Complex s = unimodular_;
      const Complex x = z[0];
      for (const auto& a : zeros_) s *= (x - a) / (1.0 - std::conj(a) * x);
      return s;
    }
  }
  return {};
}

nlohmann::json Symbol::to_json() const {
  nlohmann::json doc;
  doc["dimension"] = dim_;
  switch (kind_) {
    case Kind::constant:
      doc["kind"] = "constant";
      doc["data"] = write_complex(constant_);
      break;
    case Kind::polynomial: {
      doc["kind"] = "polynomial";
      auto arr = nlohmann::json::array();
      for (const auto& t : terms_) arr.push_back({{"powers", t.powers}, {"coeff", write_complex(t.coeff)}});
      doc["data"] = arr;
      break;
    }
    case Kind::blaschke: {
      doc["kind"] = "blaschke";
      auto zs = nlohmann::json::array();
      for (const auto& a : zeros_) zs.push_back(write_complex(a));
      doc["data"] = {{"zeros", zs}, {"unimodular", write_complex(unimodular_)}};
      break;
    }
  }
  return doc;
}

Symbol Symbol::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string() || !doc.contains("data"))
    throw std::invalid_argument("symbol document needs 'kind' and 'data'");
  std::size_t d = 1;
  if (doc.contains("dimension")) {
    if (!doc["dimension"].is_number_integer() || doc["dimension"].get<long long>() < 1)
      throw std::invalid_argument("symbol 'dimension' must be an integer >= 1");
    d = static_cast<std::size_t>(doc["dimension"].get<long long>());
  }
  const auto kind = doc["kind"].get<std::string>();
  const auto& data = doc["data"];
  try {
    if (kind == "constant") return constant(read_complex(data), d);
    if (kind == "polynomial") {
      if (!data.is_array()) throw std::invalid_argument("polynomial data must be a list of terms");
      std::vector<Term> terms;
      for (const auto& t : data) {
        if (!t.is_object() || !t.contains("powers") || !t.contains("coeff") || !t["powers"].is_array())
          throw std::invalid_argument("polynomial term needs 'powers' and 'coeff'");
        Term term;
        for (const auto& p : t["powers"]) {
          if (!p.is_number_integer() || p.get<long long>() < 0)
            throw std::invalid_argument("polynomial powers must be nonnegative integers");
          term.powers.push_back(static_cast<unsigned>(p.get<long long>()));
        }
        term.coeff = read_complex(t["coeff"]);
        terms.push_back(std::move(term));
      }
      return polynomial(d, std::move(terms));
    }
    if (kind == "blaschke") {
      if (d != 1) throw std::invalid_argument("blaschke symbols exist only for dimension 1");
      std::vector<Complex> zeros;
      Complex u{1.0, 0.0};
      if (data.is_array()) {
        for (const auto& z : data) zeros.push_back(read_complex(z));
      } else if (data.is_object()) {
        if (data.contains("zeros"))
          for (const auto& z : data["zeros"]) zeros.push_back(read_complex(z));
        if (data.contains("unimodular")) u = read_complex(data["unimodular"]);
      } else {
        throw std::invalid_argument("blaschke data must be a list of zeros or an object");
      }
      return blaschke(std::move(zeros), u);
    }
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("unknown symbol kind '" + kind + "'");
}

Symbol Symbol::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open symbol file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("symbol file '" + path + "': " + e.what());
  }
  return from_json(doc);
}

std::string Symbol::describe() const {
  std::ostringstream os;
  os.precision(6);
  switch (kind_) {
    case Kind::constant:
      os << "constant " << constant_.real() << (constant_.imag() < 0 ? "" : "+") << constant_.imag() << "i";
      break;
    case Kind::polynomial:
      os << "polynomial with " << terms_.size() << " terms" << (certified_ ? " (certified)" : " (grid-checked)");
      break;
    case Kind::blaschke:
      os << "blaschke product with " << zeros_.size() << " zeros";
      break;
  }
  return os.str();
}

Complex eval_symbol(const Symbol& b, const BallPoint& z) {
  if (z.norm() >= 1.0 - kGeometryTol && !b.boundary_closed_form()) {
    const auto lim = boundary_radial_limit([&](CoordSpan x) { return b(x); },
                                           SpherePoint::normalized({z.coords().begin(), z.coords().end()}));
    if (!lim.converged) throw std::domain_error("eval_symbol: radial limit diverges (symbol not admissible there)");
    return lim.value;
  }
  return b(z.coords());
}

Complex dbr_kernel(const Symbol& b, const BallPoint& w, CoordSpan z) {
  if (!(w.norm() < 1.0)) throw std::domain_error("dbr_kernel: need |w| < 1");
  return (1.0 - b(z) * std::conj(b(w.coords()))) * cauchy_kernel(w, z);
}

double dbr_kernel_diagonal(const Symbol& b, const BallPoint& w) {
  if (!(w.norm() < 1.0)) throw std::domain_error("dbr_kernel_diagonal: need |w| < 1");
  const double bw = std::abs(b(w.coords()));
  return (1.0 - bw * bw) / std::pow(1.0 - w.norm() * w.norm(), static_cast<double>(w.dim()));
}

CriterionProfile kernel_test(const BallMeasure& mu, const Symbol& b, const SearchGrid& search,
                             const MeasureQuadrature& quad) {
  if (mu.dim() != b.dim() || search.dim() != b.dim()) throw std::domain_error("kernel_test: dimension mismatch");
  for (const auto& a : mu.boundary_atoms()) {
    const auto lim = boundary_radial_limit([&](CoordSpan x) { return b(x); }, a.point);
    if (!lim.converged) {
      std::ostringstream os;
      os << "kernel_test: symbol has no radial limit at boundary atom (";
      const auto c = a.point.coords();
      for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : "") << c[k].real() << "+" << c[k].imag() << "i";
      os << ")";
      throw std::domain_error(os.str());
    }
  }
  CriterionProfile p;
  p.tag = ConditionTag::kernel_mass;
  const auto rs = search.radii();
  for (std::size_t c = 0; c < search.centers().size(); ++c) {
    for (double r : rs) {
      const auto w = search.centers()[c].scaled(r);
      const Complex bw = std::conj(b(w.coords()));
      const auto v = integrate_abs_power(
          mu, [&](CoordSpan z) { return (1.0 - b(z) * bw) * cauchy_kernel(w, z); }, 2.0, quad);
      p.entries.push_back({c, r, v.value / dbr_kernel_diagonal(b, w)});
    }
  }
  if (!p.entries.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.entries.size(); ++i)
      if (p.entries[i].value < p.entries[best].value) best = i;
    p.arg = best;
    p.extremal = p.entries[best].value;
  }
  return p;
}

NecessaryConstant necessary_condition_constant(const Symbol& b, const DensityExpr& g,
                                               const SphereGrid& grid, double eps) {
  if (b.dim() != grid.dim() || g.dim() != grid.dim())
    throw std::domain_error("necessary_condition_constant: dimension mismatch");
  NecessaryConstant out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto xi = grid.node(i);
    const double m = std::abs(b(xi));
    if (m >= 1.0 - eps) {
      ++out.exempt_nodes;
      continue;
    }
    ++out.constrained_nodes;
    const double gv = g(xi);
    if (gv == 0.0) {
      out.infinite = true;
      out.violating_nodes.push_back(i);
      continue;
    }
    out.constant = std::max(out.constant, 1.0 / ((1.0 - m * m) * gv));
  }
  if (out.infinite) out.constant = std::numeric_limits<double>::infinity();
  return out;
}

std::optional<NecessaryConstant> necessary_condition_closed_form(const Symbol& b, const DensityExpr& g) {
  if (b.kind() != Symbol::Kind::constant || !g.constant_value()) return std::nullopt;
  const double m = std::abs(b(std::vector<Complex>(b.dim())));
  const double gv = *g.constant_value();
  NecessaryConstant out;
  out.constrained_nodes = 1;
  if (gv == 0.0) {
    out.infinite = true;
    out.constant = std::numeric_limits<double>::infinity();
    return out;
  }
  out.constant = 1.0 / ((1.0 - m * m) * gv);
  return out;
}

std::string to_string(IntegralVerdict v) {
  switch (v) {
    case IntegralVerdict::finite:
      return "finite";
    case IntegralVerdict::divergent:
      return "divergent";
    case IntegralVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

OneMinusBIntegral one_minus_b_integral(const Symbol& b, const SphereGrid& grid, std::size_t count) {
  if (count < 2) throw std::domain_error("one_minus_b_integral: need at least two grids");
  if (b.dim() != grid.dim()) throw std::domain_error("one_minus_b_integral: dimension mismatch");
  OneMinusBIntegral out;
  SphereGrid g = grid;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) g = refine(g);
    KahanSum s;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double m = std::abs(b(g.node(i)));
      if (m < 1.0) s.add(g.weight(i) / (1.0 - m));
    }
    out.estimates.push_back(s.value());
    out.nodes.push_back(g.size());
  }
  bool growing = true, cauchy = true;
  for (std::size_t k = 1; k < count; ++k) {
    const double a = out.estimates[k - 1], c = out.estimates[k];
    if (!(c >= 1.5 * a)) growing = false;
    if (!(std::abs(c - a) <= 0.05 * std::abs(c))) cauchy = false;
  }
  out.verdict = growing ? IntegralVerdict::divergent : cauchy ? IntegralVerdict::finite : IntegralVerdict::inconclusive;
  return out;
}

double is_inner_estimate(const Symbol& b, const SphereGrid& grid, double eps) {
  if (b.dim() != grid.dim()) throw std::domain_error("is_inner_estimate: dimension mismatch");
  KahanSum s;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(b(grid.node(i))) >= 1.0 - eps) s.add(grid.weight(i));
  return s.value();
}

BallMeasure sampling_candidate_measure(const Symbol& b, const std::vector<BallPoint>& points) {
  if (points.empty()) throw std::domain_error("sampling_candidate_measure: no points");
  std::vector<InteriorAtom> atoms;
  for (const auto& w : points) {
    if (w.dim() != b.dim()) throw std::domain_error("sampling_candidate_measure: dimension mismatch");
    if (!(w.norm() < 1.0)) throw std::domain_error("sampling_candidate_measure: points must lie in the open ball");
    const double k = dbr_kernel_diagonal(b, w);
    if (!(k > 0.0) || !std::isfinite(k)) throw std::domain_error("sampling_candidate_measure: kernel diagonal vanishes");
    atoms.push_back({w, 1.0 / k});
  }
  return BallMeasure(b.dim(), std::move(atoms), std::nullopt, std::nullopt, {});
}

std::string to_string(RefutationVerdict v) {
  switch (v) {
    case RefutationVerdict::refuted:
      return "refuted";
    case RefutationVerdict::not_refuted:
      return "not_refuted";
    case RefutationVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

RefutationReport refute_sampling(const Symbol& b, const std::vector<BallPoint>& points,
                                 const SearchGrid& search, const MeasureQuadrature& quad,
                                 std::size_t refinements, double tau) {
  RefutationReport rep;
  rep.inner_fraction = is_inner_estimate(b, quad.sphere);
  for (std::size_t i = 0; i < quad.sphere.size(); ++i) {
    const double m = std::abs(b(quad.sphere.node(i)));
    if (m < 1.0 - kInnerEpsilon) {
      rep.non_inner_node = std::vector<Complex>(quad.sphere.node(i).begin(), quad.sphere.node(i).end());
      rep.non_inner_modulus = m;
      break;
    }
  }
  if (!rep.non_inner_node || rep.inner_fraction >= 1.0 - 1e-12) {
    rep.verdict = RefutationVerdict::inconclusive;
    rep.reason = "theorem does not apply: symbol is unimodular on the grid";
    return rep;
  }
  const auto mu = sampling_candidate_measure(b, points);
  rep.candidate_boundary_mass = measure_of_ball(mu, NonisotropicBall(SpherePoint::basis(b.dim()), 2.0), quad.sphere);
  rep.candidate_total_mass = total_mass(mu, quad);
  SearchGrid grid = search;
  for (std::size_t level = 0; level < refinements; ++level) {
    if (level > 0) grid = grid.refined();
    const auto prof = kernel_test(mu, b, grid, quad);
    rep.kernel_trend.push_back(prof.extremal);
    if (level + 1 == refinements && !prof.entries.empty()) {
      std::ostringstream os;
      os.precision(6);
      const auto& e = prof.entries[prof.arg];
      const auto c = grid.centers()[e.center].coords();
      os << "w = " << e.parameter << " * (";
      for (std::size_t k = 0; k < c.size(); ++k)
        os << (k ? "," : "") << c[k].real() << (c[k].imag() < 0 ? "" : "+") << c[k].imag() << "i";
      os << ")";
      rep.argmin = os.str();
    }
  }
  bool decreasing = true, halving = rep.kernel_trend.size() >= 2;
  for (std::size_t i = 1; i < rep.kernel_trend.size(); ++i) {
    if (!(rep.kernel_trend[i] < rep.kernel_trend[i - 1])) decreasing = false;
    if (!(rep.kernel_trend[i] <= 0.5 * rep.kernel_trend[i - 1])) halving = false;
  }
  const bool small = !rep.kernel_trend.empty() && rep.kernel_trend.back() <= tau;
  if (rep.candidate_boundary_mass == 0.0 && decreasing && (small || halving)) {
    rep.verdict = RefutationVerdict::refuted;
    rep.reason = "non-inner symbol; candidate measure has no boundary part and its kernel test decays to 0";
  } else {
    rep.verdict = RefutationVerdict::not_refuted;
    rep.reason = "kernel test minimum neither falls below the threshold nor halves under refinement";
  }
  return rep;
}

}  // namespace rcm
