#include "rcm/carleson_criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rcm {

std::string to_string(ConditionTag tag) {
  switch (tag) {
    case ConditionTag::integral_inequality:
      return "integral_inequality";
    case ConditionTag::kernel_mass:
      return "kernel_mass";
    case ConditionTag::ball_mass:
      return "ball_mass";
    case ConditionTag::window:
      return "window";
    case ConditionTag::forward:
      return "forward";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::positive:
      return "positive";
    case Verdict::degenerate:
      return "degenerate";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

SearchGrid::SearchGrid(std::size_t d, SearchConfig config) : dim_(d), config_(config) {
  if (d == 0) throw std::domain_error("SearchGrid: d must be >= 1");
  if (config.centers == 0 || config.delta_levels == 0 || config.kernel_levels == 0)
    throw std::domain_error("SearchGrid: centers and ladders must be nonempty");
  if (!(config.delta0 > 0.0) || config.delta0 > 2.0)
    throw std::domain_error("SearchGrid: delta0 must lie in (0, 2]");
  config_.kernel_levels = std::min(config_.kernel_levels, config_.max_kernel_level);
  config_.delta_levels = std::min(config_.delta_levels, config_.max_delta_level);
  if (d == 1) {
    for (std::size_t i = 0; i < config.centers; ++i)
      centers_.emplace_back(std::vector<Complex>{
          std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(config.centers))});
  } else {
    const auto g = sphere_grid(d, std::max<std::size_t>(config.centers, 4), SphereScheme::monte_carlo, config.seed);
    for (std::size_t i = 0; i < config.centers; ++i)
      centers_.push_back(SpherePoint::normalized({g.node(i).begin(), g.node(i).end()}));
  }
}

std::vector<double> SearchGrid::deltas() const {
  std::vector<double> out;
  for (std::size_t k = 0; k < config_.delta_levels; ++k)
    out.push_back(std::ldexp(config_.delta0, -static_cast<int>(k)));
  return out;
}

std::vector<double> SearchGrid::radii() const {
  std::vector<double> out;
  for (std::size_t k = 1; k <= config_.kernel_levels; ++k) out.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(k)));
  return out;
}

std::vector<BallPoint> SearchGrid::kernel_points() const {
  std::vector<BallPoint> out;
  const auto rs = radii();
  for (const auto& c : centers_)
    for (double r : rs) out.push_back(c.scaled(r));
  return out;
}

SearchGrid SearchGrid::refined() const {
  SearchConfig next = config_;
  next.centers *= 2;
  next.delta_levels = std::min(next.delta_levels + next.level_step, next.max_delta_level);
  next.kernel_levels = std::min(next.kernel_levels + next.level_step, next.max_kernel_level);
  return SearchGrid(dim_, next);
}

namespace {

void finish(CriterionProfile& p) {
  if (p.entries.empty()) {
    p.extremal = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.entries.size(); ++i) {
    const bool better = p.maximize ? p.entries[i].value > p.entries[best].value
                                   : p.entries[i].value < p.entries[best].value;
    if (better) best = i;
  }
  p.arg = best;
  p.extremal = p.entries[best].value;
}

void check_dims(const BallMeasure& mu, const SearchGrid& s, const SphereGrid& g) {
  if (mu.dim() != s.dim() || g.dim() != s.dim()) throw std::domain_error("criteria: dimension mismatch");
}

CriterionProfile window_ratios(const BallMeasure& mu, const SearchGrid& search,
                               const MeasureQuadrature& quad, ConditionTag tag, bool maximize) {
  check_dims(mu, search, quad.sphere);
  CriterionProfile p;
  p.tag = tag;
  p.maximize = maximize;
  const auto deltas = search.deltas();
  for (std::size_t c = 0; c < search.centers().size(); ++c) {
    for (double delta : deltas) {
      const NonisotropicBall q(search.centers()[c], delta);
      const double s = grid_sigma(q, quad.sphere);
      if (s <= 0.0) {
        ++p.skipped;
        continue;
      }
      const auto window = CarlesonWindow::standard(q);
      const RadialRule radial(mu.dim(), window.depth(), quad.radial_nodes);
      p.entries.push_back({c, delta, measure_of_window(mu, window, quad.sphere, radial) / s});
    }
  }
  finish(p);
  return p;
}

}  // namespace

CriterionProfile condition_iii_profile(const BallMeasure& mu, const SearchGrid& search,
                                       const SphereGrid& grid) {
  check_dims(mu, search, grid);
  CriterionProfile p;
  p.tag = ConditionTag::ball_mass;
  const auto deltas = search.deltas();
  for (std::size_t c = 0; c < search.centers().size(); ++c) {
    for (double delta : deltas) {
      const NonisotropicBall q(search.centers()[c], delta);
      const double s = grid_sigma(q, grid);
      if (s <= 0.0) {
        ++p.skipped;
        continue;
      }
      p.entries.push_back({c, delta, measure_of_ball(mu, q, grid) / s});
    }
  }
  finish(p);
  return p;
}

CriterionProfile condition_ii_profile(const BallMeasure& mu, const Exponents& e,
                                      const SearchGrid& search, const MeasureQuadrature& quad) {
  check_dims(mu, search, quad.sphere);
  CriterionProfile p;
  p.tag = ConditionTag::kernel_mass;
  const auto rs = search.radii();
  for (std::size_t c = 0; c < search.centers().size(); ++c) {
    for (double r : rs) {
      const auto w = search.centers()[c].scaled(r);
      const auto k = normalized_kernel(w, e);
      const auto v = integrate_abs_power(mu, [&](CoordSpan z) { return k(z); }, e.p(), quad);
      p.entries.push_back({c, r, v.value});
    }
  }
  finish(p);
  return p;
}

CriterionProfile window_profile(const BallMeasure& mu, const SearchGrid& search,
                                const MeasureQuadrature& quad) {
  return window_ratios(mu, search, quad, ConditionTag::window, false);
}

CriterionProfile forward_profile(const BallMeasure& mu, const SearchGrid& search,
                                 const MeasureQuadrature& quad) {
  return window_ratios(mu, search, quad, ConditionTag::forward, true);
}

std::vector<TestFunction> default_test_family(const SearchGrid& search, const Exponents& e) {
  std::vector<TestFunction> family;
  const auto points = search.kernel_points();
  for (const auto& w : points) family.push_back(normalized_kernel(w, e));

  std::mt19937_64 rng(search.config().seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < search.centers().size(); ++i) {
    const std::size_t a = pick(rng), b = pick(rng);
    if (a == b) continue;
    family.push_back(TestFunction::kernels(search.dim(), {Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng))},
                                           {points[a], points[b]}));
  }
  const std::size_t d = search.dim();
  for (std::size_t k = 0; k < d; ++k) {
    for (unsigned deg = 1; deg <= 2; ++deg) {
      std::vector<unsigned> powers(d, 0);
      powers[k] = deg;
      family.push_back(TestFunction::polynomial(d, {{powers, Complex(1.0, 0.0)}}));
    }
  }
  if (d >= 2) {
    std::vector<unsigned> powers(d, 0);
    powers[0] = powers[1] = 1;
    family.push_back(TestFunction::polynomial(d, {{powers, Complex(1.0, 0.0)}}));
  }
  return family;
}

WitnessResult reverse_inequality_witness(const BallMeasure& mu, const Exponents& e,
                                         const std::vector<TestFunction>& family,
                                         const MeasureQuadrature& quad) {
  if (family.empty()) throw std::domain_error("reverse_inequality_witness: empty family");
  WitnessResult out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    const auto known = f.known_norm(e.p());
    const double norm = known ? *known : hp_norm(f, e, quad.sphere);
    if (!(norm > 0.0)) throw std::domain_error("reverse_inequality_witness: zero-norm test function " + f.describe());
    const auto lhs = integrate_abs_power(mu, [&](CoordSpan z) { return f(z); }, e.p(), quad);
    const double ratio = lhs.value / std::pow(norm, e.p());
    out.ratios.push_back(ratio);
    if (ratio < out.min_ratio) {
      out.min_ratio = ratio;
      out.index = i;
    }
  }
  out.witness = family[out.index].describe();
  return out;
}

Verdict classify_trend(const std::vector<double>& trend, double tau) {
  if (trend.empty()) return Verdict::inconclusive;
  const double last = trend.back();
  if (std::isnan(last)) return Verdict::inconclusive;
  bool halving = trend.size() >= 2;
  for (std::size_t i = 1; i < trend.size(); ++i)
    if (!(trend[i] <= 0.5 * trend[i - 1])) halving = false;
  const bool holds = trend.size() < 2 || last >= 0.5 * trend[trend.size() - 2];
  if (last >= tau && holds && !halving) return Verdict::positive;
  if (last < tau || halving) return Verdict::degenerate;
  return Verdict::inconclusive;
}

namespace {

std::string describe_entry(const SearchGrid& s, const CriterionProfile& p) {
  if (p.entries.empty()) return "none";
  const auto& e = p.entries[p.arg];
  std::ostringstream os;
  os.precision(6);
  os << "center=(";
  const auto c = s.centers()[e.center].coords();
  for (std::size_t k = 0; k < c.size(); ++k)
    os << (k ? "," : "") << c[k].real() << (c[k].imag() < 0 ? "" : "+") << c[k].imag() << "i";
  os << ") " << (p.tag == ConditionTag::kernel_mass ? "r=" : "delta=") << e.parameter;
  return os.str();
}

}  // namespace

EquivalenceReport equivalence_report(const BallMeasure& mu, const Exponents& e,
                                     const SearchGrid& search, const MeasureQuadrature& quad,
                                     double tau, std::size_t refinements) {
  if (refinements == 0) throw std::domain_error("equivalence_report: need at least one grid");
  if (!(tau > 0.0)) throw std::domain_error("equivalence_report: threshold must be positive");
  EquivalenceReport rep;
  rep.tau = tau;
  ConditionSummary s1, s2, s3;
  s1.tag = ConditionTag::integral_inequality;
  s2.tag = ConditionTag::kernel_mass;
  s3.tag = ConditionTag::ball_mass;
  rep.window.tag = ConditionTag::window;
  rep.forward.tag = ConditionTag::forward;

  SearchGrid grid = search;
  for (std::size_t level = 0; level < refinements; ++level) {
    if (level > 0) grid = grid.refined();
    const auto family = default_test_family(grid, e);
    const auto witness = reverse_inequality_witness(mu, e, family, quad);
    auto p2 = condition_ii_profile(mu, e, grid, quad);
    auto p3 = condition_iii_profile(mu, grid, quad.sphere);
    auto pw = window_profile(mu, grid, quad);
    auto pf = forward_profile(mu, grid, quad);
    s1.trend.push_back(witness.min_ratio);
    s2.trend.push_back(p2.extremal);
    s3.trend.push_back(p3.extremal);
    rep.window.trend.push_back(pw.extremal);
    rep.forward.trend.push_back(pf.extremal);
    if (level + 1 == refinements) {
      s1.argmin = witness.witness;
      s2.argmin = describe_entry(grid, p2);
      s3.argmin = describe_entry(grid, p3);
      rep.window.argmin = describe_entry(grid, pw);
      rep.forward.argmin = describe_entry(grid, pf);
      CriterionProfile p1;
      p1.tag = ConditionTag::integral_inequality;
      for (std::size_t i = 0; i < witness.ratios.size(); ++i) p1.entries.push_back({i, 0.0, witness.ratios[i]});
      p1.extremal = witness.min_ratio;
      p1.arg = witness.index;
      rep.finest = {std::move(p1), std::move(p2), std::move(p3), std::move(pw), std::move(pf)};
    }
  }
  for (auto* s : {&s1, &s2, &s3, &rep.window}) s->verdict = classify_trend(s->trend, tau);
  rep.forward.verdict = Verdict::inconclusive;
  if (!rep.forward.trend.empty() && std::isfinite(rep.forward.trend.back())) {
    // Bounded forward profile: no growth beyond a factor 2 across refinements.
    bool bounded = true;
    for (std::size_t i = 1; i < rep.forward.trend.size(); ++i)
      if (rep.forward.trend[i] > 2.0 * rep.forward.trend[i - 1]) bounded = false;
    rep.forward.verdict = bounded ? Verdict::positive : Verdict::degenerate;
  }
  rep.conditions = {s1, s2, s3};
  const bool all_pos = s1.verdict == Verdict::positive && s2.verdict == Verdict::positive &&
                       s3.verdict == Verdict::positive;
  const bool all_deg = s1.verdict == Verdict::degenerate && s2.verdict == Verdict::degenerate &&
                       s3.verdict == Verdict::degenerate;
  rep.agree = all_pos || all_deg;
  return rep;
}

}  // namespace rcm
