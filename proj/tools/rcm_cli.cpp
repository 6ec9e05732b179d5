// rcm: experiment runner for reverse Carleson measure computations.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rcm/ball_geometry.hpp"
#include "rcm/carleson_criteria.hpp"
#include "rcm/dbr.hpp"
#include "rcm/hardy_kernels.hpp"
#include "rcm/measures.hpp"
#include "rcm/quadrature.hpp"

using namespace rcm;
using nlohmann::json;

namespace {

enum Exit { ok = 0, verdict_failure = 1, input_error = 2, numerical = 3 };

struct Config {
  std::size_t dim = 1;
  double p = 2.0;
  std::size_t resolution = 0;  // 0: per-command default
  std::size_t refinements = 3;
  std::uint64_t seed = 7;
  std::optional<double> threshold;
  std::string measure, symbol, points, out;
  double delta = 0.5;
  double height = 0.1;
};

// Thrown for inputs that parse but make no sense (exit 2).
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Outcome {
  json report;
  std::string table;
  std::string csv;
  int code = ok;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string fmt_point(CoordSpan z) {
  std::ostringstream os;
  os << std::setprecision(6) << "(";
  for (std::size_t k = 0; k < z.size(); ++k)
    os << (k ? "," : "") << z[k].real() << (z[k].imag() < 0 ? "" : "+") << z[k].imag() << "i";
  os << ")";
  return os.str();
}

json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

SphereGrid measure_grid(const Config& c) {
  if (c.dim == 1) return sphere_grid(1, c.resolution ? c.resolution : 4096);
  if (c.dim == 2) return sphere_grid(2, c.resolution ? c.resolution : 48, SphereScheme::torus_product, c.seed);
  return sphere_grid(c.dim, c.resolution ? c.resolution : 20000, SphereScheme::monte_carlo, c.seed);
}

// Radial Gauss-Legendre nodes per window. The sphere grid limits accuracy for d >= 2,
// where 12 nodes already resolve kernels with |w| <= 7/8.
MeasureQuadrature measure_quadrature(const Config& c) { return {measure_grid(c), c.dim == 1 ? 24u : 12u}; }

SearchConfig search_config(const Config& c) {
  SearchConfig s;
  s.seed = c.seed;
  if (c.dim == 1) {
    s.centers = 16;
    s.kernel_levels = 4;
    s.delta_levels = 4;
    s.level_step = 2;
  } else {
    // The torus rule resolves kernels only up to r = 7/8 at the default resolution.
    s.centers = 8;
    s.kernel_levels = 2;
    s.delta_levels = 3;
    s.level_step = 1;
    s.max_kernel_level = 3;
  }
  return s;
}

BallMeasure load_measure(const Config& c) {
  if (c.measure.empty()) return BallMeasure::surface(c.dim);
  auto mu = BallMeasure::load(c.measure);
  if (mu.dim() != c.dim)
    throw InputError("measure dimension " + std::to_string(mu.dim()) + " differs from --dim " + std::to_string(c.dim));
  return mu;
}

std::vector<BallPoint> load_points(const std::string& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open points file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InputError("points file '" + path + "': " + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array())
    throw InputError("points file needs a 'points' list");
  if (doc.contains("dimension") && doc["dimension"] != dim)
    throw InputError("points file dimension differs from the symbol dimension");
  std::vector<BallPoint> out;
  for (const auto& p : doc["points"]) {
    BallPoint w(parse_point(p, dim));
    if (!(w.norm() < 1.0)) throw InputError("points must lie in the open ball");
    out.push_back(std::move(w));
  }
  if (out.empty()) throw InputError("points file has no points");
  return out;
}

json config_json(const Config& c, const std::string& command) {
  json j{{"command", command}, {"dim", c.dim}, {"p", c.p}, {"refinements", c.refinements}, {"seed", c.seed}};
  if (c.resolution) j["resolution"] = c.resolution;
  if (c.threshold) j["threshold"] = *c.threshold;
  if (!c.measure.empty()) j["measure"] = std::filesystem::path(c.measure).filename().string();
  if (!c.symbol.empty()) j["symbol"] = std::filesystem::path(c.symbol).filename().string();
  if (!c.points.empty()) j["points"] = std::filesystem::path(c.points).filename().string();
  return j;
}

// ---------------------------------------------------------------- verify-kernels

Outcome verify_kernels(const Config& c) {
  const Exponents e(c.p, c.dim);
  const double tol = c.threshold.value_or(1e-6);
  SphereGrid grid = c.dim == 1   ? sphere_grid(1, c.resolution ? c.resolution : 512)
                    : c.dim == 2 ? sphere_grid(2, c.resolution ? c.resolution : 64, SphereScheme::torus_product, c.seed)
                                 : sphere_grid(c.dim, c.resolution ? c.resolution : 200000, SphereScheme::monte_carlo, c.seed);
  std::vector<std::pair<std::string, SpherePoint>> directions{{"e1", SpherePoint::basis(c.dim)}};
  {
    const auto g = sphere_grid(c.dim, 4, SphereScheme::monte_carlo, c.seed);
    directions.emplace_back("random", SpherePoint::normalized({g.node(0).begin(), g.node(0).end()}));
  }
  Outcome o;
  json rows = json::array();
  std::ostringstream t, csv;
  csv << "direction,radius,closed_form,series,quadrature,rel_err_closed,rel_err_series,poisson_mass\n";
  csv << std::setprecision(17);
  t << "kernel norms, d=" << c.dim << " p=" << fmt(c.p) << " grid=" << to_string(grid.scheme()) << " nodes=" << grid.size()
    << "\n";
  t << std::left << std::setw(8) << "dir" << std::setw(6) << "|w|" << std::setw(14) << "closed" << std::setw(14)
    << "series" << std::setw(14) << "quadrature" << std::setw(12) << "err" << std::setw(12) << "err(series)"
    << "poisson\n";
  double max_err = 0.0, max_series = 0.0, max_poisson = 0.0;
  for (const auto& [name, dir] : directions) {
    for (double r : {0.0, 0.3, 0.6, 0.9}) {
      const auto w = dir.scaled(r);
      const double closed = kernel_norm(w, e);
      const double series = kernel_norm_exact(w, e);
      const double quad = kernel_norm_quadrature(w, e, grid);
      const double err = std::abs(quad - closed) / closed;
      const double err_s = std::abs(quad - series) / series;
      const double pm = integrate_sphere_real([&](CoordSpan xi) { return poisson_kernel(w, xi); }, grid);
      max_err = std::max(max_err, err);
      max_series = std::max(max_series, err_s);
      max_poisson = std::max(max_poisson, std::abs(pm - 1.0));
      rows.push_back({{"direction", name}, {"radius", r}, {"closed_form", closed}, {"series", series},
                      {"quadrature", quad}, {"rel_err_closed", err}, {"rel_err_series", err_s},
                      {"poisson_mass", pm}});
      csv << name << "," << r << "," << closed << "," << series << "," << quad << "," << err << "," << err_s << ","
          << pm << "\n";
      t << std::setw(8) << name << std::setw(6) << fmt(r) << std::setw(14) << fmt(closed, 9) << std::setw(14)
        << fmt(series, 9) << std::setw(14) << fmt(quad, 9) << std::setw(12) << fmt(err, 3) << std::setw(12)
        << fmt(err_s, 3) << fmt(pm, 12) << "\n";
    }
  }
  const bool pass = max_err <= tol && max_poisson <= tol;
  t << "max rel err vs closed form " << fmt(max_err, 3) << " (tolerance " << fmt(tol, 3) << "), vs series "
    << fmt(max_series, 3) << ", poisson " << fmt(max_poisson, 3) << ": " << (pass ? "PASS" : "FAIL") << "\n";
  o.report = {{"rows", rows},
              {"grid", {{"scheme", to_string(grid.scheme())}, {"nodes", grid.size()}}},
              {"max_rel_err", max_err},
              {"max_rel_err_series", max_series},
              {"max_poisson_err", max_poisson},
              {"tolerance", tol},
              {"pass", pass}};
  o.table = t.str();
  o.csv = csv.str();
  o.code = pass ? ok : verdict_failure;
  return o;
}

// ---------------------------------------------------------------- criteria / equivalence

json summary_json(const ConditionSummary& s) {
  json trend = json::array();
  for (double v : s.trend) trend.push_back(num(v));
  return {{"condition", to_string(s.tag)}, {"trend", trend}, {"argmin", s.argmin}, {"verdict", to_string(s.verdict)}};
}

void summary_row(std::ostream& t, const ConditionSummary& s) {
  t << std::left << std::setw(22) << to_string(s.tag) << std::setw(14) << to_string(s.verdict);
  std::string trend;
  for (double v : s.trend) trend += fmt(v, 5) + " ";
  t << std::setw(36) << trend << s.argmin << "\n";
}

Outcome run_equivalence(const Config& c, bool full) {
  const auto mu = load_measure(c);
  const Exponents e(c.p, c.dim);
  const MeasureQuadrature quad = measure_quadrature(c);
  const SearchGrid search(c.dim, search_config(c));
  const double tau = c.threshold.value_or(1e-3);
  const auto rep = equivalence_report(mu, e, search, quad, tau, c.refinements);

  Outcome o;
  json conds = json::array();
  for (const auto& s : rep.conditions) conds.push_back(summary_json(s));
  o.report = {{"tau", tau}, {"conditions", conds}, {"agree", rep.agree},
              {"quadrature", {{"scheme", to_string(quad.sphere.scheme())}, {"nodes", quad.sphere.size()}}}};
  std::ostringstream t;
  t << (full ? "criteria" : "equivalence") << ", d=" << c.dim << " p=" << fmt(c.p) << " tau=" << fmt(tau)
    << " refinements=" << c.refinements << "\n";
  t << std::left << std::setw(22) << "condition" << std::setw(14) << "verdict" << std::setw(36) << "trend"
    << "argmin\n";
  for (const auto& s : rep.conditions) summary_row(t, s);
  if (full) {
    summary_row(t, rep.window);
    summary_row(t, rep.forward);
    o.report["window"] = summary_json(rep.window);
    o.report["forward"] = summary_json(rep.forward);
  }
  t << "reverse conditions " << (rep.agree ? "agree" : "DISAGREE") << "\n";
  o.table = t.str();

  std::ostringstream csv;
  csv << std::setprecision(17) << "condition,index,parameter,value\n";
  for (const auto& p : rep.finest) {
    if (!full && (p.tag == ConditionTag::window || p.tag == ConditionTag::forward)) continue;
    for (const auto& en : p.entries)
      csv << to_string(p.tag) << "," << en.center << "," << en.parameter << "," << en.value << "\n";
  }
  o.csv = csv.str();
  o.code = rep.agree ? ok : numerical;
  return o;
}

// ---------------------------------------------------------------- pack

Outcome run_pack(const Config& c) {
  if (!(c.height > 0.0 && c.height < c.delta)) throw InputError("pack needs 0 < --height < --delta");
  if (!(c.delta > 0.0 && c.delta <= 2.0)) throw InputError("--delta must lie in (0, 2]");
  const auto g = sphere_grid(c.dim, 4, SphereScheme::monte_carlo, c.seed);
  const NonisotropicBall q(SpherePoint::normalized({g.node(0).begin(), g.node(0).end()}), c.delta);
  const auto pk = greedy_packing(q, c.height, c.seed);
  std::size_t overlaps = 0, outside = 0;
  const NonisotropicBall twice(q.center(), 2.0 * q.delta());
  for (std::size_t i = 0; i < pk.balls.size(); ++i) {
    if (!ball_inside(pk.balls[i], twice)) ++outside;
    for (std::size_t j = i + 1; j < pk.balls.size(); ++j)
      if (balls_intersect(pk.balls[i], pk.balls[j])) ++overlaps;
  }
  Outcome o;
  o.report = {{"center", point_to_json(q.center().coords())},
              {"delta", c.delta},
              {"height", c.height},
              {"balls", pk.balls.size()},
              {"candidates", pk.candidates},
              {"overlapping_pairs", overlaps},
              {"balls_outside_2Q", outside},
              {"certificate_points", pk.certificate_points},
              {"uncovered", pk.uncovered},
              {"cover_factor", pk.cover_factor}};
  std::ostringstream t;
  t << "packing of Q(" << fmt_point(q.center().coords()) << ", " << fmt(c.delta) << ") by balls of radius "
    << fmt(c.height) << "\n";
  t << "  balls " << pk.balls.size() << ", overlapping pairs " << overlaps << ", outside 2Q " << outside << "\n";
  t << "  doubled cover: " << pk.uncovered << " of " << pk.certificate_points
    << " certificate points uncovered, cover factor " << fmt(pk.cover_factor, 4) << "\n";
  bool additive = true;
  if (!c.measure.empty()) {
    const auto mu = load_measure(c);
    const auto grid = measure_grid(c);
    const RadialRule radial(c.dim, c.height, 24);
    KahanSum parts;
    for (const auto& b : pk.balls) parts.add(measure_of_window(mu, CarlesonWindow(b, c.height), grid, radial));
    o.report["window_mass_sum"] = parts.value();
    if (!mu.interior_density() && !mu.boundary_density()) {
      double uni = 0.0;
      for (const auto& a : mu.interior_atoms())
        for (const auto& b : pk.balls)
          if (window_contains(CarlesonWindow(b, c.height), a.point)) {
            uni += a.mass;
            break;
          }
      for (const auto& a : mu.boundary_atoms())
        for (const auto& b : pk.balls)
          if (ball_contains(b, a.point)) {
            uni += a.mass;
            break;
          }
      const double err = std::abs(uni - parts.value());
      additive = err <= 1e-12 * std::max(1.0, uni);
      o.report["union_mass"] = uni;
      o.report["additivity_error"] = err;
      t << "  window masses: sum " << fmt(parts.value(), 12) << ", union " << fmt(uni, 12) << "\n";
    }
  }
  const bool pass = overlaps == 0 && outside == 0 && pk.covers() && additive;
  o.report["pass"] = pass;
  t << (pass ? "PASS" : "FAIL") << "\n";
  o.table = t.str();
  std::ostringstream csv;
  csv << std::setprecision(17) << "index,delta";
  for (std::size_t k = 1; k <= c.dim; ++k) csv << ",re" << k << ",im" << k;
  csv << "\n";
  json balls = json::array();
  for (std::size_t i = 0; i < pk.balls.size(); ++i) {
    csv << i << "," << pk.balls[i].delta();
    for (const auto& z : pk.balls[i].center().coords()) csv << "," << z.real() << "," << z.imag();
    csv << "\n";
    balls.push_back(point_to_json(pk.balls[i].center().coords()));
  }
  o.report["ball_centers"] = balls;
  o.csv = csv.str();
  o.code = pass ? ok : verdict_failure;
  return o;
}

// ---------------------------------------------------------------- dbr-check

Symbol load_symbol(const Config& c) {
  if (c.symbol.empty()) throw InputError("--symbol is required");
  auto b = Symbol::load(c.symbol);
  if (b.dim() != c.dim)
    throw InputError("symbol dimension " + std::to_string(b.dim()) + " differs from --dim " + std::to_string(c.dim));
  return b;
}

json necessary_json(const NecessaryConstant& n) {
  return {{"constant", num(n.constant)},
          {"infinite", n.infinite},
          {"violating_nodes", n.violating_nodes.size()},
          {"first_violating_node", n.violating_nodes.empty() ? json(nullptr) : json(n.violating_nodes.front())},
          {"exempt_nodes", n.exempt_nodes},
          {"constrained_nodes", n.constrained_nodes}};
}

Outcome run_dbr(const Config& c) {
  const auto b = load_symbol(c);
  const auto mu = load_measure(c);
  const MeasureQuadrature quad = measure_quadrature(c);
  const SearchGrid search(c.dim, search_config(c));

  const double inner = is_inner_estimate(b, quad.sphere);
  const DensityExpr g = mu.boundary_density() ? *mu.boundary_density() : DensityExpr::constant(0.0, c.dim);
  const double gscale = mu.boundary_density() ? mu.boundary_scale() : 1.0;
  auto nec = necessary_condition_constant(b, g, quad.sphere);
  if (!nec.infinite) nec.constant /= gscale;
  auto closed = necessary_condition_closed_form(b, g);
  if (closed && !closed->infinite) closed->constant /= gscale;
  const auto integral = one_minus_b_integral(b, quad.sphere);
  const auto kt = kernel_test(mu, b, search, quad);

  Outcome o;
  json est = json::array();
  for (double v : integral.estimates) est.push_back(v);
  o.report = {{"symbol", b.to_json()},
              {"inner_fraction", inner},
              {"necessary_condition", necessary_json(nec)},
              {"necessary_condition_closed_form", closed ? necessary_json(*closed) : json(nullptr)},
              {"one_minus_b_integral", {{"estimates", est}, {"nodes", integral.nodes}, {"verdict", to_string(integral.verdict)}}},
              {"kernel_test", {{"min", num(kt.extremal)}, {"argmin_radius", kt.entries.empty() ? 0.0 : kt.entries[kt.arg].parameter}}}};
  if (nec.infinite && !nec.violating_nodes.empty())
    o.report["necessary_condition"]["violating_point"] = point_to_json(quad.sphere.node(nec.violating_nodes.front()));

  std::ostringstream t;
  t << "symbol: " << b.describe() << " (d=" << c.dim << ")\n";
  t << "  inner fraction             " << fmt(inner) << "\n";
  t << "  necessary constant C*      " << (nec.infinite ? std::string("inf") : fmt(nec.constant, 12)) << " ("
    << nec.constrained_nodes << " constrained, " << nec.exempt_nodes << " exempt nodes)\n";
  if (nec.infinite && !nec.violating_nodes.empty())
    t << "    violated at " << fmt_point(quad.sphere.node(nec.violating_nodes.front())) << "\n";
  if (closed) t << "  closed form C*             " << (closed->infinite ? std::string("inf") : fmt(closed->constant, 12)) << "\n";
  t << "  int 1/(1-|b|) d sigma      " << to_string(integral.verdict) << ":";
  for (double v : integral.estimates) t << " " << fmt(v);
  t << "\n  kernel test minimum        " << fmt(kt.extremal) << "\n";
  o.table = t.str();

  std::ostringstream csv;
  csv << std::setprecision(17) << "center,radius,value\n";
  for (const auto& en : kt.entries) csv << en.center << "," << en.parameter << "," << en.value << "\n";
  o.csv = csv.str();
  return o;
}

// ---------------------------------------------------------------- refute-sampling

Outcome run_refute(const Config& c) {
  const auto b = load_symbol(c);
  if (c.points.empty()) throw InputError("--points is required");
  const auto pts = load_points(c.points, c.dim);
  const MeasureQuadrature quad = measure_quadrature(c);
  const SearchGrid search(c.dim, search_config(c));
  const auto rep = refute_sampling(b, pts, search, quad, c.refinements, c.threshold.value_or(1e-2));

  Outcome o;
  json trend = json::array();
  for (double v : rep.kernel_trend) trend.push_back(num(v));
  o.report = {{"verdict", to_string(rep.verdict)},
              {"reason", rep.reason},
              {"inner_fraction", rep.inner_fraction},
              {"non_inner_node", rep.non_inner_node ? point_to_json(*rep.non_inner_node) : json(nullptr)},
              {"non_inner_modulus", rep.non_inner_modulus},
              {"candidate_boundary_mass", rep.candidate_boundary_mass},
              {"candidate_total_mass", rep.candidate_total_mass},
              {"kernel_trend", trend},
              {"argmin", rep.argmin},
              {"points", pts.size()}};
  std::ostringstream t;
  t << "sampling refutation for " << b.describe() << " with " << pts.size() << " points\n";
  t << "  inner fraction          " << fmt(rep.inner_fraction) << "\n";
  if (rep.non_inner_node) t << "  non-inner node          " << fmt_point(*rep.non_inner_node) << " |b|=" << fmt(rep.non_inner_modulus) << "\n";
  t << "  candidate boundary mass " << fmt(rep.candidate_boundary_mass) << ", total mass " << fmt(rep.candidate_total_mass) << "\n";
  t << "  kernel test minima     ";
  for (double v : rep.kernel_trend) t << " " << fmt(v);
  t << "\n  verdict: " << to_string(rep.verdict) << " (" << rep.reason << ")\n";
  o.table = t.str();
  std::ostringstream csv;
  csv << std::setprecision(17) << "refinement,kernel_test_min\n";
  for (std::size_t i = 0; i < rep.kernel_trend.size(); ++i) csv << i << "," << rep.kernel_trend[i] << "\n";
  o.csv = csv.str();
  return o;
}

void write_outputs(const Config& c, const std::string& command, Outcome& o) {
  o.report["config"] = config_json(c, command);
  o.report["exit_code"] = o.code;
  if (c.out.empty()) return;
  std::filesystem::path path(c.out);
  std::ofstream js(path);
  if (!js) throw InputError("cannot write '" + c.out + "'");
  js << o.report.dump(2) << "\n";
  auto csv_path = path;
  csv_path.replace_extension(".csv");
  if (csv_path == path) csv_path += ".profile.csv";
  std::ofstream cs(csv_path);
  cs << o.csv;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reverse Carleson measure experiments on the unit ball"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values");
  Config c;
  app.add_option("--dim", c.dim, "complex dimension d")->check(CLI::Range(1, 16));
  app.add_option("--p", c.p, "Hardy exponent p")->check(CLI::PositiveNumber);
  app.add_option("--resolution", c.resolution, "sphere grid resolution (scheme dependent)");
  app.add_option("--refinements", c.refinements, "number of search refinements")->check(CLI::Range(1, 12));
  app.add_option("--seed", c.seed, "seed for Monte Carlo grids and sampled centers");
  app.add_option("--threshold", c.threshold, "verdict threshold or tolerance")->check(CLI::PositiveNumber);
  app.add_option("--measure", c.measure, "measure JSON file");
  app.add_option("--symbol", c.symbol, "symbol JSON file");
  app.add_option("--points", c.points, "points JSON file");
  app.add_option("--out", c.out, "JSON report path; a CSV lands beside it");
  app.add_option("--delta", c.delta, "pack: radius of Q");
  app.add_option("--height", c.height, "pack: radius h of the packed balls");

  auto* verify = app.add_subcommand("verify-kernels", "kernel norms and Poisson masses against closed forms");
  auto* criteria = app.add_subcommand("criteria", "all condition profiles, windows and forward profile");
  auto* equiv = app.add_subcommand("equivalence", "agreement of the three reverse conditions");
  auto* pack = app.add_subcommand("pack", "greedy disjoint packing with a doubled-cover certificate");
  auto* dbr = app.add_subcommand("dbr-check", "H(b) diagnostics for a symbol and a measure");
  auto* refute = app.add_subcommand("refute-sampling", "sampling-sequence refutation for a symbol and points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }
  if (c.resolution != 0 && c.resolution < 4) {
    std::cerr << "error: --resolution must be at least 4\n";
    return input_error;
  }

  std::string command;
  try {
    Outcome o;
    if (verify->parsed()) {
      command = "verify-kernels";
      o = verify_kernels(c);
    } else if (criteria->parsed()) {
      command = "criteria";
      o = run_equivalence(c, true);
    } else if (equiv->parsed()) {
      command = "equivalence";
      o = run_equivalence(c, false);
    } else if (pack->parsed()) {
      command = "pack";
      o = run_pack(c);
    } else if (dbr->parsed()) {
      command = "dbr-check";
      o = run_dbr(c);
    } else if (refute->parsed()) {
      command = "refute-sampling";
      o = run_refute(c);
    }
    write_outputs(c, command, o);
    std::cout << o.table;
    return o.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error in " << command << ": " << e.what() << "\n";
    return numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return numerical;
  }
}
