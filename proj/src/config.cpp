#include "nctorus/config.hpp"

#include <cmath>
#include <fstream>

#include "nctorus/error.hpp"

namespace nct {

namespace {

template <class T>
void read_if(const Json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const Json::exception& e) {
      throw ConfigError(std::string("bad value for \"") + key + "\": " + e.what());
    }
  }
}

MatrixFunction parse_matrix_function(const Json& spec) {
  const Json& rows = spec.at("entries");
  const std::size_t m = rows.size();
  std::vector<std::vector<double>> poly(m * m);
  std::vector<double> rate(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != m) throw ConfigError("functional metric entries must be square");
    for (std::size_t j = 0; j < m; ++j) {
      const Json& e = rows[i][j];
      if (e.is_number()) {
        poly[i * m + j] = {e.get<double>()};
      } else {
        poly[i * m + j] = e.at("poly").get<std::vector<double>>();
        rate[i * m + j] = e.value("exp", 0.0);
      }
    }
  }
  MatrixFunction f;
  f.size = m;
  if (spec.contains("domain")) {
    f.domain_min = spec.at("domain")[0].get<double>();
    f.domain_max = spec.at("domain")[1].get<double>();
  }
  f.value = [m, poly, rate](double t) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m * m; ++k) {
      double p = 0.0;
      for (auto c = poly[k].rbegin(); c != poly[k].rend(); ++c) p = p * t + *c;
      a(static_cast<Eigen::Index>(k / m), static_cast<Eigen::Index>(k % m)) = p * std::exp(rate[k] * t);
    }
    return a;
  };
  return f;
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  if (j.contains("geometry")) c.geometry = parse_geometry(j.at("geometry"));
  read_if(j, "box_radius", c.box_radius);
  read_if(j, "multiplier_radius", c.multiplier_radius);
  read_if(j, "calculus_radius", c.calculus_radius);
  read_if(j, "stability_radius", c.stability_radius);
  read_if(j, "seed", c.seed);
  read_if(j, "count", c.count);
  read_if(j, "quadrature_points", c.quadrature_points);
  if (j.contains("metric")) c.metric = j.at("metric");
  if (j.contains("density")) c.density = j.at("density");
  if (j.contains("conformal_factor")) c.conformal_factor = j.at("conformal_factor");
  if (j.contains("determinant")) c.determinant = j.at("determinant");
  if (j.contains("window")) {
    auto w = j.at("window").get<std::vector<std::size_t>>();
    if (w.size() != 2) throw ConfigError("window must be [first, last]");
    c.window_first = w[0];
    c.window_last = w[1];
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    Tolerances& o = c.tolerances;
    read_if(t, "asymmetry", o.asymmetry);
    read_if(t, "stability_rel", o.stability_rel);
    read_if(t, "multiplicity", o.multiplicity);
    read_if(t, "kernel", o.kernel);
    read_if(t, "green", o.green);
    read_if(t, "adjointness", o.adjointness);
    read_if(t, "conformal", o.conformal);
    read_if(t, "determinant", o.determinant);
    read_if(t, "oracle_algebraic", o.oracle_algebraic);
    read_if(t, "oracle", o.oracle);
  }
  if (c.box_radius < 1) throw ConfigError("box_radius must be positive");
  if (c.multiplier_radius < 0) throw ConfigError("multiplier_radius must be nonnegative");
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("malformed JSON in " + path + ": " + e.what());
  }
  return from_json(j);
}

int RunConfig::effective_calculus_radius() const {
  if (calculus_radius > 0) return calculus_radius;
  return std::max(box_radius + 2 * multiplier_radius, 4 * multiplier_radius);
}

AssemblyOptions RunConfig::assembly() const {
  AssemblyOptions o;
  o.multiplier_radius = multiplier_radius;
  o.calculus_radius = effective_calculus_radius();
  return o;
}

RiemannianMetric build_metric(const Json& spec, const LiteralContext& ctx, const MetricValidationOptions& opts) {
  const std::string type = spec.value("type", "");
  const int n = ctx.geometry.dim();
  if (type == "flat") return metric_flat(ctx.geometry, ctx.box, opts);
  if (type == "conformal") {
    RiemannianMetric base = spec.contains("base") ? build_metric(spec.at("base"), ctx, opts)
                                                  : metric_flat(ctx.geometry, ctx.box, opts);
    return metric_conformal(base, parse_element(spec.at("k"), ctx), opts);
  }
  if (type == "product") {
    std::vector<RiemannianMetric> blocks;
    for (const auto& b : spec.at("blocks")) {
      if (b.value("type", "") == "scalar") {
        AlgebraElement x = parse_element(b.at("value"), ctx);
        blocks.push_back(RiemannianMetric::validate(TorusMatrix::from_element(x), ctx.box, opts));
      } else {
        blocks.push_back(build_metric(b, ctx, opts));
      }
    }
    return metric_product(blocks, opts);
  }
  if (type == "explicit") {
    TorusMatrix g = parse_matrix(spec.at("entries"), ctx);
    if (g.size() != static_cast<std::size_t>(n)) throw ConfigError("explicit metric must be n x n");
    return RiemannianMetric::validate(g, ctx.box, opts);
  }
  if (type == "functional") {
    return metric_functional(parse_element(spec.at("h"), ctx), parse_matrix_function(spec), ctx.box, opts);
  }
  throw ConfigError("unknown metric type \"" + type + "\"");
}

LaplaceBeltramiOperator build_operator(const RunConfig& cfg) {
  LiteralContext ctx = cfg.context();
  RiemannianMetric g = build_metric(cfg.metric, ctx);
  if (g.size() != static_cast<std::size_t>(cfg.geometry.dim())) throw ConfigError("metric must be n x n");
  if (cfg.density) {
    Density nu = Density::from_element(parse_element(*cfg.density, ctx), ctx.box);
    return assemble_from_dual(g.inverse(), nu, cfg.box(), cfg.assembly());
  }
  return assemble_riemannian(g, cfg.box(), cfg.assembly());
}

}  // namespace nct
