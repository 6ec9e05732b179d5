#include "rcm/measures.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "rcm/hardy_kernels.hpp"

namespace rcm {

// ---------------------------------------------------------------------------
// DensityExpr

struct DensityExpr::Node {
  enum class Kind {
    number, radius, re, im, absz, absip, ind, step, abs, sqrt, exp, neg, add, sub, mul, div, pow
  };
  Kind kind;
  double value = 0.0;           // number literal; delta for ind
  std::size_t index = 0;        // coordinate for re/im/absz
  std::vector<Complex> point;   // absip/ind
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = DensityExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  Parser(std::string_view src, std::size_t dim) : src_(src), dim_(dim) {}

  NodePtr parse() {
    auto n = expr();
    skip();
    if (pos_ != src_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  std::string_view src_;
  std::size_t dim_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "density expression: " << what << " at position " << pos_ << " in '" << src_ << "'";
    throw std::invalid_argument(os.str());
  }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  static NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr expr() {
    auto n = term();
    for (;;) {
      if (accept('+')) n = make(Node::Kind::add, n, term());
      else if (accept('-')) n = make(Node::Kind::sub, n, term());
      else return n;
    }
  }
  NodePtr term() {
    auto n = power();
    for (;;) {
      if (accept('*')) n = make(Node::Kind::mul, n, power());
      else if (accept('/')) n = make(Node::Kind::div, n, power());
      else return n;
    }
  }
  NodePtr power() {
    auto base = unary();
    if (accept('^')) return make(Node::Kind::pow, base, power());
    return base;
  }
  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::neg, unary());
    return primary();
  }

  bool peek_number() {
    skip();
    if (pos_ >= src_.size()) return false;
    const char c = src_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }
  double number() {
    skip();
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return v;
  }
  std::string identifier() {
    skip();
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  // number, number 'i', number ('+'|'-') number 'i', each optionally signed.
  Complex complex_literal() {
    double sign = 1.0;
    if (accept('-')) sign = -1.0;
    else accept('+');
    if (accept('i')) return {0.0, sign};
    const double a = sign * number();
    if (accept('i')) return {0.0, a};
    skip();
    if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
      const double s2 = src_[pos_] == '-' ? -1.0 : 1.0;
      ++pos_;
      double b = 1.0;
      if (peek_number()) b = number();
      expect('i');
      return {a, s2 * b};
    }
    return {a, 0.0};
  }
  std::vector<Complex> point() {
    expect('[');
    std::vector<Complex> pt{complex_literal()};
    while (accept(',')) pt.push_back(complex_literal());
    expect(']');
    if (pt.size() != dim_) fail("point has " + std::to_string(pt.size()) + " coordinates, expected " + std::to_string(dim_));
    return pt;
  }
  std::size_t coordinate_index() {
    const double k = number();
    if (k < 1.0 || k != std::floor(k) || k > static_cast<double>(dim_))
      fail("coordinate index must be an integer in 1.." + std::to_string(dim_));
    return static_cast<std::size_t>(k) - 1;
  }

  NodePtr primary() {
    if (accept('(')) {
      auto n = expr();
      expect(')');
      return n;
    }
    if (peek_number()) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::number;
      n->value = number();
      return n;
    }
    const std::size_t at = pos_;
    const std::string id = identifier();
    if (id.empty()) fail("expected an expression");
    if (id == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::number;
      n->value = std::numbers::pi;
      return n;
    }
    if (id == "r") return make(Node::Kind::radius);
    auto n = std::make_shared<Node>();
    expect('(');
    if (id == "re" || id == "im" || id == "absz") {
      n->kind = id == "re" ? Node::Kind::re : id == "im" ? Node::Kind::im : Node::Kind::absz;
      n->index = coordinate_index();
    } else if (id == "absip") {
      n->kind = Node::Kind::absip;
      n->point = point();
    } else if (id == "ind") {
      n->kind = Node::Kind::ind;
      n->point = point();
      expect(',');
      n->value = number();
      if (!(n->value > 0.0) || n->value > 2.0) fail("ind radius must lie in (0, 2]");
      if (euclidean_norm(n->point) == 0.0) fail("ind center must be nonzero");
      const double len = euclidean_norm(n->point);
      for (auto& c : n->point) c /= len;
    } else if (id == "step" || id == "abs" || id == "sqrt" || id == "exp") {
      n->kind = id == "step" ? Node::Kind::step
                : id == "abs"  ? Node::Kind::abs
                : id == "sqrt" ? Node::Kind::sqrt
                               : Node::Kind::exp;
      n->lhs = expr();
    } else {
      pos_ = at;
      fail("unknown name '" + id + "'");
    }
    expect(')');
    return n;
  }
};

double eval_node(const Node& n, CoordSpan z) {
  using K = Node::Kind;
  switch (n.kind) {
    case K::number:
      return n.value;
    case K::radius:
      return euclidean_norm(z);
    case K::re:
      return z[n.index].real();
    case K::im:
      return z[n.index].imag();
    case K::absz:
      return std::abs(z[n.index]);
    case K::absip:
      return std::abs(inner(z, n.point));
    case K::ind: {
      const double r = euclidean_norm(z);
      if (r == 0.0) return 0.0;
      return std::abs(1.0 - inner(n.point, z) / r) <= n.value + kGeometryTol ? 1.0 : 0.0;
    }
    case K::step:
      return eval_node(*n.lhs, z) >= 0.0 ? 1.0 : 0.0;
    case K::abs:
      return std::abs(eval_node(*n.lhs, z));
    case K::sqrt:
      return std::sqrt(eval_node(*n.lhs, z));
    case K::exp:
      return std::exp(eval_node(*n.lhs, z));
    case K::neg:
      return -eval_node(*n.lhs, z);
    case K::add:
      return eval_node(*n.lhs, z) + eval_node(*n.rhs, z);
    case K::sub:
      return eval_node(*n.lhs, z) - eval_node(*n.rhs, z);
    case K::mul:
      return eval_node(*n.lhs, z) * eval_node(*n.rhs, z);
    case K::div:
      return eval_node(*n.lhs, z) / eval_node(*n.rhs, z);
    case K::pow:
      return std::pow(eval_node(*n.lhs, z), eval_node(*n.rhs, z));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

DensityExpr DensityExpr::parse(std::string_view source, std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("density expression: dimension must be >= 1");
  DensityExpr e;
  e.source_ = std::string(source);
  e.dim_ = dim;
  e.root_ = Parser(source, dim).parse();
  if (e.root_->kind == Node::Kind::number) e.constant_ = e.root_->value;
  if (e.constant_ && (*e.constant_ < 0.0 || !std::isfinite(*e.constant_)))
    throw std::invalid_argument("density expression: constant density must be finite and nonnegative");
  return e;
}

DensityExpr DensityExpr::constant(double value, std::size_t dim) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return parse(os.str(), dim);
}

double DensityExpr::evaluate_unchecked(CoordSpan z) const {
  if (z.size() != dim_) throw std::domain_error("density expression: dimension mismatch");
  return eval_node(*root_, z);
}

double DensityExpr::operator()(CoordSpan z) const {
  const double v = evaluate_unchecked(z);
  if (!std::isfinite(v) || v < 0.0) {
    std::ostringstream os;
    os << "density '" << source_ << "' evaluates to " << v << " (must be finite and >= 0)";
    throw std::domain_error(os.str());
  }
  return v;
}

// ---------------------------------------------------------------------------
// BallMeasure

namespace {

bool same_location(CoordSpan a, CoordSpan b) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != b[k]) return false;
  return true;
}

}  // namespace

BallMeasure::BallMeasure(std::size_t dim, std::vector<InteriorAtom> interior_atoms,
                         std::optional<DensityExpr> interior_density,
                         std::optional<DensityExpr> boundary_density,
                         std::vector<BoundaryAtom> boundary_atoms)
    : dim_(dim),
      interior_atoms_(std::move(interior_atoms)),
      interior_density_(std::move(interior_density)),
      boundary_density_(std::move(boundary_density)),
      boundary_atoms_(std::move(boundary_atoms)) {
  if (dim == 0) throw std::domain_error("BallMeasure: dimension must be >= 1");
  for (const auto& a : interior_atoms_) {
    if (a.point.dim() != dim) throw std::domain_error("BallMeasure: interior atom dimension mismatch");
    if (!(a.point.norm() < 1.0)) throw std::domain_error("BallMeasure: interior atom must satisfy |z| < 1");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw std::domain_error("BallMeasure: atom masses must be positive");
  }
  for (const auto& a : boundary_atoms_) {
    if (a.point.dim() != dim) throw std::domain_error("BallMeasure: boundary atom dimension mismatch");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw std::domain_error("BallMeasure: atom masses must be positive");
  }
  for (std::size_t i = 0; i < interior_atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < interior_atoms_.size(); ++j)
      if (same_location(interior_atoms_[i].point.coords(), interior_atoms_[j].point.coords()))
        throw std::domain_error("BallMeasure: duplicate interior atom location");
  for (std::size_t i = 0; i < boundary_atoms_.size(); ++i)
    for (std::size_t j = i + 1; j < boundary_atoms_.size(); ++j)
      if (same_location(boundary_atoms_[i].point.coords(), boundary_atoms_[j].point.coords()))
        throw std::domain_error("BallMeasure: duplicate boundary atom location");
  if (interior_density_ && interior_density_->dim() != dim)
    throw std::domain_error("BallMeasure: interior density dimension mismatch");
  if (boundary_density_ && boundary_density_->dim() != dim)
    throw std::domain_error("BallMeasure: boundary density dimension mismatch");
  if (interior_atoms_.empty() && boundary_atoms_.empty() && !interior_density_ && !boundary_density_)
    throw std::domain_error("BallMeasure: the zero measure is not allowed");
}

BallMeasure BallMeasure::surface(std::size_t dim, double c) {
  return BallMeasure(dim, {}, std::nullopt, DensityExpr::constant(1.0, dim), {}).scaled(c);
}

BallMeasure BallMeasure::volume(std::size_t dim, double c) {
  return BallMeasure(dim, {}, DensityExpr::constant(1.0, dim), std::nullopt, {}).scaled(c);
}

BallMeasure BallMeasure::point_mass(const BallPoint& at, double mass) {
  if (at.norm() < 1.0) return BallMeasure(at.dim(), {{at, mass}}, std::nullopt, std::nullopt, {});
  return BallMeasure(at.dim(), {}, std::nullopt, std::nullopt,
                     {{SpherePoint::normalized({at.coords().begin(), at.coords().end()}), mass}});
}

double BallMeasure::boundary_density_at(CoordSpan xi) const {
  return boundary_density_ ? boundary_scale_ * (*boundary_density_)(xi) : 0.0;
}

double BallMeasure::interior_density_at(CoordSpan z) const {
  return interior_density_ ? interior_scale_ * (*interior_density_)(z) : 0.0;
}

BallMeasure BallMeasure::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::domain_error("BallMeasure::scaled: factor must be positive");
  BallMeasure m = *this;
  for (auto& a : m.interior_atoms_) a.mass *= c;
  for (auto& a : m.boundary_atoms_) a.mass *= c;
  m.interior_scale_ *= c;
  m.boundary_scale_ *= c;
  return m;
}

std::vector<Complex> parse_point(const nlohmann::json& j, std::size_t dim) {
  if (!j.is_array()) throw std::invalid_argument("point must be a list of coordinates");
  std::vector<Complex> out;
  for (const auto& c : j) {
    if (c.is_number()) {
      out.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      out.emplace_back(c[0].get<double>(), c[1].get<double>());
    } else {
      throw std::invalid_argument("coordinate must be a number or a [re, im] pair");
    }
  }
  if (out.size() != dim)
    throw std::invalid_argument("point has " + std::to_string(out.size()) + " coordinates, expected " +
                                std::to_string(dim));
  return out;
}

nlohmann::json point_to_json(CoordSpan z) {
  auto arr = nlohmann::json::array();
  for (const auto& c : z) arr.push_back({c.real(), c.imag()});
  return arr;
}

namespace {

// The stored expression already includes the density factor, so the JSON form
// writes "c*(expr)" when a measure has been scaled.
std::string scaled_source(const DensityExpr& e, double factor) {
  if (factor == 1.0) return e.source();
  std::ostringstream os;
  os.precision(17);
  os << factor << "*(" << e.source() << ")";
  return os.str();
}

double read_mass(const nlohmann::json& atom) {
  if (!atom.contains("mass") || !atom["mass"].is_number())
    throw std::invalid_argument("atom needs a numeric 'mass'");
  const double m = atom["mass"].get<double>();
  if (m < 0.0) throw std::invalid_argument("atom mass must not be negative");
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("atom mass must be positive and finite");
  return m;
}

}  // namespace

nlohmann::json BallMeasure::to_json() const {
  nlohmann::json doc;
  doc["dimension"] = dim_;
  auto ia = nlohmann::json::array();
  for (const auto& a : interior_atoms_) ia.push_back({{"point", point_to_json(a.point.coords())}, {"mass", a.mass}});
  doc["interior_atoms"] = ia;
  doc["interior_density"] = interior_density_ ? nlohmann::json(scaled_source(*interior_density_, interior_scale_))
                                              : nlohmann::json(nullptr);
  doc["boundary_density"] = boundary_density_ ? nlohmann::json(scaled_source(*boundary_density_, boundary_scale_))
                                              : nlohmann::json(nullptr);
  auto ba = nlohmann::json::array();
  for (const auto& a : boundary_atoms_) ba.push_back({{"point", point_to_json(a.point.coords())}, {"mass", a.mass}});
  doc["boundary_atoms"] = ba;
  return doc;
}

BallMeasure BallMeasure::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("measure document must be an object");
  static const std::vector<std::string> known{"dimension", "interior_atoms", "interior_density",
                                              "boundary_density", "boundary_atoms"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown measure field '" + key + "'");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer() || doc["dimension"].get<long long>() < 1)
    throw std::invalid_argument("measure needs an integer 'dimension' >= 1");
  const auto d = static_cast<std::size_t>(doc["dimension"].get<long long>());

  std::vector<InteriorAtom> interior;
  if (doc.contains("interior_atoms")) {
    if (!doc["interior_atoms"].is_array()) throw std::invalid_argument("'interior_atoms' must be a list");
    for (const auto& a : doc["interior_atoms"]) {
      if (!a.is_object() || !a.contains("point")) throw std::invalid_argument("interior atom needs a 'point'");
      const double m = read_mass(a);
      const auto z = parse_point(a["point"], d);
      if (!(euclidean_norm(z) < 1.0)) throw std::invalid_argument("interior atom must lie in the open ball");
      interior.push_back({BallPoint(z), m});
    }
  }
  std::vector<BoundaryAtom> boundary;
  if (doc.contains("boundary_atoms")) {
    if (!doc["boundary_atoms"].is_array()) throw std::invalid_argument("'boundary_atoms' must be a list");
    for (const auto& a : doc["boundary_atoms"]) {
      if (!a.is_object() || !a.contains("point")) throw std::invalid_argument("boundary atom needs a 'point'");
      const double m = read_mass(a);
      const auto xi = parse_point(a["point"], d);
      if (!(euclidean_norm(xi) > 0.0)) throw std::invalid_argument("boundary atom point must be nonzero");
      boundary.push_back({SpherePoint::normalized(xi), m});
    }
  }
  auto density = [&](const char* key) -> std::optional<DensityExpr> {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    if (doc[key].is_number()) return DensityExpr::constant(doc[key].get<double>(), d);
    if (!doc[key].is_string()) throw std::invalid_argument(std::string("'") + key + "' must be an expression string");
    return DensityExpr::parse(doc[key].get<std::string>(), d);
  };
  try {
    return BallMeasure(d, std::move(interior), density("interior_density"), density("boundary_density"),
                       std::move(boundary));
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(e.what());
  }
}

BallMeasure BallMeasure::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open measure file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("measure file '" + path + "': " + e.what());
  }
  return from_json(doc);
}

// ---------------------------------------------------------------------------
// Evaluation

double grid_sigma(const NonisotropicBall& q, const SphereGrid& grid) {
  if (q.dim() != grid.dim()) throw std::domain_error("grid_sigma: dimension mismatch");
  KahanSum s;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (q.contains(grid.node(i))) s.add(grid.weight(i));
  return s.value();
}

double measure_of_ball(const BallMeasure& mu, const NonisotropicBall& q, const SphereGrid& grid) {
  if (q.dim() != mu.dim() || grid.dim() != mu.dim()) throw std::domain_error("measure_of_ball: dimension mismatch");
  KahanSum s;
  if (mu.boundary_density()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto xi = grid.node(i);
      if (!q.contains(xi)) continue;
      s.add(grid.weight(i) * mu.boundary_density_at(xi));
    }
  }
  for (const auto& a : mu.boundary_atoms())
    if (q.contains(a.point.coords())) s.add(a.mass);
  return s.value();
}

double measure_of_window(const BallMeasure& mu, const CarlesonWindow& s, const SphereGrid& grid,
                         const RadialRule& radial) {
  if (s.ball().dim() != mu.dim()) throw std::domain_error("measure_of_window: dimension mismatch");
  KahanSum total;
  if (mu.interior_density()) {
    const Complex v = integrate_window(
        [&](CoordSpan z) { return Complex(mu.interior_density_at(z), 0.0); }, s, grid, radial);
    total.add(v.real());
  }
  for (const auto& a : mu.interior_atoms())
    if (s.contains(a.point.coords())) total.add(a.mass);
  if (s.closed_outer()) total.add(measure_of_ball(mu, s.ball(), grid));
  return total.value();
}

namespace {

const NonisotropicBall& full_sphere(std::size_t d) {
  static thread_local std::vector<std::unique_ptr<NonisotropicBall>> cache;
  if (cache.size() <= d) cache.resize(d + 1);
  if (!cache[d]) cache[d] = std::make_unique<NonisotropicBall>(SpherePoint::basis(d), 2.0);
  return *cache[d];
}

}  // namespace

MeasureIntegral integrate_abs_power(const BallMeasure& mu, const std::function<Complex(CoordSpan)>& f,
                                    double p, const MeasureQuadrature& quad, BoundaryEvaluation mode) {
  if (quad.sphere.dim() != mu.dim()) throw std::domain_error("integrate_abs_power: dimension mismatch");
  if (!(p > 0.0)) throw std::domain_error("integrate_abs_power: exponent must be positive");
  auto power = [p](Complex v) {
    return p == 2.0 ? std::norm(v) : std::pow(std::abs(v), p);
  };
  MeasureIntegral out;
  KahanSum s;
  for (const auto& a : mu.interior_atoms()) s.add(a.mass * power(f(a.point.coords())));
  if (mu.interior_density()) {
    const CarlesonWindow whole(full_sphere(mu.dim()), 1.0);
    const RadialRule radial(mu.dim(), 1.0, quad.radial_nodes);
    const Complex v = integrate_window(
        [&](CoordSpan z) { return Complex(mu.interior_density_at(z) * power(f(z)), 0.0); }, whole,
        quad.sphere, radial);
    s.add(v.real());
  }
  if (mu.boundary_density()) {
    s.add(integrate_sphere_real(
        [&](CoordSpan xi) {
          const double g = mu.boundary_density_at(xi);
          return g == 0.0 ? 0.0 : g * power(f(xi));
        },
        quad.sphere));
  }
  for (const auto& a : mu.boundary_atoms()) {
    if (mode == BoundaryEvaluation::direct) {
      s.add(a.mass * power(f(a.point.coords())));
      continue;
    }
    const auto lim = boundary_radial_limit(f, a.point);
    if (!lim.converged) {
      out.infinite = true;
      std::ostringstream os;
      os << "radial limit diverges at boundary atom (";
      const auto c = a.point.coords();
      for (std::size_t k = 0; k < c.size(); ++k) os << (k ? ", " : "") << c[k].real() << "+" << c[k].imag() << "i";
      os << ")";
      out.note = os.str();
      out.value = std::numeric_limits<double>::infinity();
      return out;
    }
    s.add(a.mass * power(lim.value));
  }
  out.value = s.value();
  return out;
}

double integrate_measure(const BallMeasure& mu, const std::function<double(CoordSpan)>& f,
                         const MeasureQuadrature& quad) {
  auto checked = [&](CoordSpan z) {
    const double v = f(z);
    if (v < 0.0) throw std::domain_error("integrate_measure: integrand must be nonnegative");
    return Complex(v, 0.0);
  };
  return integrate_abs_power(mu, checked, 1.0, quad).value;
}

double total_mass(const BallMeasure& mu, const MeasureQuadrature& quad) {
  return integrate_measure(mu, [](CoordSpan) { return 1.0; }, quad);
}

DensityRatioTable radon_nikodym_profile(const BallMeasure& mu, const std::vector<SpherePoint>& centers,
                                        const std::vector<double>& deltas, const SphereGrid& grid) {
  for (std::size_t j = 1; j < deltas.size(); ++j)
    if (!(deltas[j] < deltas[j - 1])) throw std::domain_error("radon_nikodym_profile: deltas must decrease");
  DensityRatioTable t{centers, deltas, {}};
  for (const auto& c : centers) {
    std::vector<double> row;
    for (double delta : deltas) {
      const NonisotropicBall q(c, delta);
      const double s = grid_sigma(q, grid);
      row.push_back(s > 0.0 ? measure_of_ball(mu, q, grid) / s : std::numeric_limits<double>::quiet_NaN());
    }
    t.ratios.push_back(std::move(row));
  }
  return t;
}

}  // namespace rcm
