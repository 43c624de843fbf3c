#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

#include "nctorus/nctorus.hpp"

using namespace nct;

namespace {

struct Outcome {
  Json report;
  bool ok = true;
};

void emit(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out);
  if (!f) throw ConfigError("cannot write " + out);
  f << j.dump(2) << "\n";
}

AlgebraElement random_element(const TorusGeometry& g, int radius, double amp, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-amp, amp);
  AlgebraElement u(g, radius);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = {d(rng), d(rng)};
  return u;
}

Outcome run_spectrum(const RunConfig& cfg, std::size_t count, const std::string& out) {
  LaplaceBeltramiOperator op = build_operator(cfg);
  SpectrumOptions so;
  so.count = count;
  so.stability_radius = cfg.stability_radius;
  so.stability_rel_tol = cfg.tolerances.stability_rel;
  so.group_tol = cfg.tolerances.multiplicity;
  so.strict = false;
  SpectrumResult s = spectrum(op, so);

  std::ofstream csv;
  std::ostream* os = &std::cout;
  if (!out.empty()) {
    csv.open(out);
    if (!csv) throw ConfigError("cannot write " + out);
    os = &csv;
  }
  *os << "index,eigenvalue,stable,group\n";
  const std::size_t shown = std::min<std::size_t>(count, static_cast<std::size_t>(s.eigenvalues.size()));
  os->precision(17);
  for (std::size_t i = 0; i < shown; ++i) {
    *os << i << "," << s.eigenvalues(static_cast<Eigen::Index>(i)) << "," << (s.stable[i] ? 1 : 0) << ","
        << s.group[i] << "\n";
  }

  Outcome o;
  o.report = {{"asymmetry", s.asymmetry},
              {"reliable", s.reliable},
              {"kernel_dimension", s.kernel_dimension(cfg.tolerances.kernel)},
              {"min_reliable", s.min_reliable()}};
  o.ok = s.reliable >= count && s.asymmetry <= cfg.tolerances.asymmetry &&
         s.min_reliable() >= -cfg.tolerances.kernel && s.kernel_dimension(cfg.tolerances.kernel) == 1;
  if (!out.empty()) std::cerr << o.report.dump(2) << "\n";
  return o;
}

Outcome run_weyl(const RunConfig& cfg, const std::string& window, const std::string& out) {
  std::size_t first = cfg.window_first, last = cfg.window_last;
  if (!window.empty()) {
    auto colon = window.find(':');
    if (colon == std::string::npos) throw ConfigError("window must be first:last");
    first = std::stoul(window.substr(0, colon));
    last = std::stoul(window.substr(colon + 1));
  }
  LiteralContext ctx = cfg.context();
  RiemannianMetric g = build_metric(cfg.metric, ctx);
  LaplaceBeltramiOperator op = assemble_riemannian(g, cfg.box(), cfg.assembly());
  SpectrumOptions so;
  so.count = last + 1;
  so.stability_radius = cfg.stability_radius;
  so.stability_rel_tol = cfg.tolerances.stability_rel;
  so.strict = false;
  SpectrumResult s = spectrum(op, so);
  WeylConstant c = weyl_constant(g, cfg.quadrature_points);
  WeylFit f = weyl_fit(s, c.quadrature, cfg.geometry.dim(), first, last);

  Outcome o;
  o.report = {{"c_n", c.quadrature},
              {"window", {first, last}},
              {"reliable", s.reliable},
              {"exponent", f.exponent},
              {"target_exponent", f.target_exponent},
              {"prefactor", f.prefactor},
              {"target_prefactor", f.target_prefactor},
              {"ratio_min", f.ratio_min},
              {"ratio_max", f.ratio_max},
              {"ratio_mean", f.ratio_mean}};
  if (c.closed_form) {
    o.report["c_n_closed_form"] = *c.closed_form;
    o.report["closed_form_residual"] = std::abs(*c.closed_form - c.quadrature);
  }
  o.ok = std::abs(f.exponent / f.target_exponent - 1.0) <= 0.05 && std::abs(f.ratio_min - 1.0) <= 0.15 &&
         std::abs(f.ratio_max - 1.0) <= 0.15;
  emit(o.report, out);
  return o;
}

Outcome run_conformal(const RunConfig& cfg, const std::string& out) {
  if (!cfg.conformal_factor) throw ConfigError("conformal-check needs \"conformal_factor\"");
  LiteralContext ctx = cfg.context();
  RiemannianMetric g = build_metric(cfg.metric, ctx);
  AlgebraElement k = parse_element(*cfg.conformal_factor, ctx);
  ConformalCheckOptions co;
  co.probe_radius = std::max(1, cfg.box_radius - 2 * cfg.multiplier_radius);
  ConformalCovarianceReport r = conformal_covariance_check(g, k, co);
  Outcome o;
  o.report = {{"commutation_residual", r.commutation_residual},
              {"law_residual", r.law_residual},
              {"scaling_residual", r.scaling_residual},
              {"probes", r.probes}};
  o.ok = r.law_residual <= cfg.tolerances.conformal &&
         (cfg.geometry.dim() != 2 || r.scaling_residual <= cfg.tolerances.conformal);
  emit(o.report, out);
  return o;
}

Outcome run_det(const RunConfig& cfg) {
  if (!cfg.determinant) throw ConfigError("det-check needs \"determinant\": {\"h\", \"h_prime\", \"u\"}");
  LiteralContext ctx = cfg.context();
  const Json& d = *cfg.determinant;
  TorusMatrix h = parse_matrix(d.at("h"), ctx);
  TorusMatrix hp = parse_matrix(d.at("h_prime"), ctx);
  TorusMatrix u = parse_matrix(d.at("u"), ctx);
  DeterminantReport r = determinant_identities_check(h, hp, u, cfg.box());
  Outcome o;
  for (const auto& e : r.residuals) o.report[e.identity] = e.residual;
  o.ok = r.max_residual() <= cfg.tolerances.determinant;
  emit(o.report, "");
  return o;
}

Outcome run_adjoint(const RunConfig& cfg, int instances) {
  LiteralContext ctx = cfg.context();
  RiemannianMetric g = build_metric(cfg.metric, ctx);
  TorusMatrix h = g.matrix();
  Density nu = cfg.density ? Density::from_element(parse_element(*cfg.density, ctx), ctx.box)
                           : riemannian_density(g);
  FormMetric fm = FormMetric::from_inverse(g.inverse(), nu, ctx.box);
  std::mt19937_64 rng(cfg.seed);
  const int r = std::max(1, cfg.box_radius / 4);
  double worst = 0.0;
  for (int t = 0; t < instances; ++t) {
    OneForm w;
    for (int i = 0; i < cfg.geometry.dim(); ++i) w.components.push_back(random_element(cfg.geometry, r, 1.0, rng));
    AlgebraElement u = random_element(cfg.geometry, r, 1.0, rng);
    Complex lhs = inner_product_nu_opp(-divergence_one_form(w, fm), u, fm.density.nu);
    Complex rhs = form_inner_product(w, differential(u), fm);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  Outcome o;
  o.report = {{"instances", instances}, {"max_residual", worst}};
  o.ok = worst <= cfg.tolerances.adjointness;
  emit(o.report, "");
  return o;
}

Outcome run_volume(const RunConfig& cfg) {
  LiteralContext ctx = cfg.context();
  RiemannianMetric g = build_metric(cfg.metric, ctx);
  Outcome o;
  o.report["volume"] = volume(g);
  if (cfg.conformal_factor) {
    AlgebraElement k = parse_element(*cfg.conformal_factor, ctx);
    RiemannianMetric scaled = metric_conformal(g, k);
    const int n = cfg.geometry.dim();
    AlgebraElement kn = functional_calculus(k, ScalarFunction::pow(n), ctx.box);
    AlgebraElement expected = multiply_to_radius(kn, riemannian_density(g).element(), ctx.box.radius());
    double r = max_abs_diff_within(riemannian_density(scaled).element(), expected, cfg.box_radius);
    o.report["conformal_density_residual"] = r;
    o.report["conformal_volume"] = volume(scaled);
    o.ok = r <= cfg.tolerances.conformal;
  }
  emit(o.report, "");
  return o;
}

Outcome run_oracle(const RunConfig& cfg, const std::string& out) {
  if (!cfg.geometry.is_commutative()) throw NonzeroTheta("oracle-compare needs theta = 0");
  const TorusGeometry& g = cfg.geometry;
  const int n = g.dim();
  LatticeBox calc = cfg.calculus_box();
  std::mt19937_64 rng(cfg.seed);
  const int r = 2;
  AlgebraElement u = random_element(g, r, 1.0, rng);
  AlgebraElement v = random_element(g, r, 1.0, rng);
  AlgebraElement y = random_element(g, 1, 0.2, rng);
  AlgebraElement x = make_positive(y, 1.0).value;
  std::vector<AlgebraElement> entries;
  for (int i = 0; i < n * n; ++i) {
    AlgebraElement e = random_element(g, 1, 0.1, rng);
    entries.push_back(0.5 * (e + adjoint(e)));
  }
  TorusMatrix h = make_positive(TorusMatrix(static_cast<std::size_t>(n), entries), 1.0).value;
  const int out_radius = cfg.box_radius;
  const int grid = 4 * calc.radius();

  Outcome o;
  double e = max_abs_diff(multiply(u, v), oracle::multiply(u, v));
  o.report["multiply"] = e;
  o.ok = o.ok && e <= cfg.tolerances.oracle_algebraic;

  for (const auto& [name, f] : std::vector<std::pair<std::string, ScalarFunction>>{
           {"sqrt", ScalarFunction::sqrt()}, {"log", ScalarFunction::log()}, {"exp", ScalarFunction::exp()},
           {"inv", ScalarFunction::inv()}}) {
    AlgebraElement main = functional_calculus(x, f, calc);
    AlgebraElement ref = oracle::funcalc(x, [f](double t) { return f(t); }, out_radius, grid);
    e = max_abs_diff_within(main, ref, out_radius);
    o.report["funcalc_" + name] = e;
    o.ok = o.ok && e <= cfg.tolerances.oracle;
  }

  e = max_abs_diff_within(determinant(h, calc), oracle::det(h, out_radius, grid), out_radius);
  o.report["determinant"] = e;
  o.ok = o.ok && e <= cfg.tolerances.oracle;

  RiemannianMetric gm = RiemannianMetric::validate(h, calc);
  e = max_abs_diff_within(riemannian_density(gm).element(), oracle::density(h, out_radius, grid), out_radius);
  o.report["density"] = e;
  o.ok = o.ok && e <= cfg.tolerances.oracle;

  Density nu = Density::from_element(x, calc);
  FormMetric fm = FormMetric::build(h, nu, calc);
  e = max_abs_diff_within(apply_laplacian(u, fm), oracle::laplacian(h, x, u, out_radius, grid), out_radius);
  o.report["laplacian"] = e;
  o.ok = o.ok && e <= cfg.tolerances.oracle;

  emit(o.report, out);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-Beltrami operators on noncommutative tori"};
  app.require_subcommand(1);
  std::string config_path, out, window;
  std::size_t count = 50;
  int instances = 50;

  auto add_config = [&](CLI::App* sub) { sub->add_option("--config", config_path, "JSON run configuration")->required(); };
  auto* spec = app.add_subcommand("spectrum", "eigenvalues with stability flags and multiplicity groups (CSV)");
  add_config(spec);
  spec->add_option("--count", count, "number of eigenvalues");
  spec->add_option("--out", out, "CSV path (stdout if omitted)");
  auto* weyl = app.add_subcommand("weyl", "Weyl constant and eigenvalue asymptotics fit");
  add_config(weyl);
  weyl->add_option("--window", window, "first:last eigenvalue indices");
  weyl->add_option("--out", out, "JSON path");
  auto* conf = app.add_subcommand("conformal-check", "conformal transformation law residuals");
  add_config(conf);
  conf->add_option("--out", out, "JSON path");
  auto* det = app.add_subcommand("det-check", "determinant identities");
  add_config(det);
  auto* adj = app.add_subcommand("adjoint-check", "divergence / differential adjointness on random inputs");
  add_config(adj);
  adj->add_option("--instances", instances, "random instances");
  auto* vol = app.add_subcommand("volume", "volume and conformal density scaling");
  add_config(vol);
  auto* orc = app.add_subcommand("oracle-compare", "max errors against the commutative grid oracle");
  add_config(orc);
  orc->add_option("--out", out, "JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = RunConfig::load(config_path);
    Outcome o;
    if (*spec) o = run_spectrum(cfg, count, out);
    else if (*weyl) o = run_weyl(cfg, window, out);
    else if (*conf) o = run_conformal(cfg, out);
    else if (*det) o = run_det(cfg);
    else if (*adj) o = run_adjoint(cfg, instances);
    else if (*vol) o = run_volume(cfg);
    else if (*orc) o = run_oracle(cfg, out);
    return o.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
