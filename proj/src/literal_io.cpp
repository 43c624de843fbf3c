#include "nctorus/literal_io.hpp"

#include "nctorus/error.hpp"

namespace nct {

namespace {

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("expected a number or [re, im], got " + j.dump());
}

}  // namespace

TorusGeometry parse_geometry(const Json& j) {
  if (!j.is_object() || !j.contains("n")) throw ConfigError("geometry needs an integer field \"n\"");
  const int n = j.at("n").get<int>();
  std::vector<double> theta(static_cast<std::size_t>(n * n), 0.0);
  if (j.contains("theta")) {
    const Json& t = j.at("theta");
    if (t.is_number()) {
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          theta[static_cast<std::size_t>(a * n + b)] = t.get<double>();
          theta[static_cast<std::size_t>(b * n + a)] = -t.get<double>();
        }
      }
    } else if (t.is_array() && t.size() == static_cast<std::size_t>(n)) {
      for (int a = 0; a < n; ++a) {
        if (!t[static_cast<std::size_t>(a)].is_array() || t[static_cast<std::size_t>(a)].size() != static_cast<std::size_t>(n)) {
          throw ConfigError("theta rows must have n entries");
        }
        for (int b = 0; b < n; ++b) theta[static_cast<std::size_t>(a * n + b)] = t[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)].get<double>();
      }
    } else {
      throw ConfigError("theta must be a number or an n x n array");
    }
  }
  try {
    return TorusGeometry(n, std::move(theta));
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid geometry: ") + e.what());
  }
}

Json to_json(const TorusGeometry& g) {
  const int n = g.dim();
  Json t = Json::array();
  for (int a = 0; a < n; ++a) {
    Json row = Json::array();
    for (int b = 0; b < n; ++b) row.push_back(g.theta(a, b));
    t.push_back(row);
  }
  return {{"n", n}, {"theta", t}};
}

AlgebraElement parse_element(const Json& j, const LiteralContext& ctx) {
  const TorusGeometry& g = ctx.geometry;
  const int n = g.dim();
  if (j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number())) {
    return AlgebraElement::scalar(g, parse_complex(j));
  }
  if (!j.is_object()) throw ConfigError("unrecognised element literal " + j.dump());

  AlgebraElement x = AlgebraElement::zero(g);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      std::vector<int> k = t.at("k").get<std::vector<int>>();
      if (k.size() != static_cast<std::size_t>(n)) throw ConfigError("mode " + t.at("k").dump() + " needs n entries");
      x += AlgebraElement::basis(g, k, parse_complex(t.at("c")));
    }
  } else if (j.contains("sum")) {
    for (const auto& t : j.at("sum")) x += parse_element(t, ctx);
  } else if (j.contains("product")) {
    x = AlgebraElement::identity(g);
    for (const auto& t : j.at("product")) {
      AlgebraElement f = parse_element(t, ctx);
      x = multiply(x, f.resized(f.support_radius()));
    }
  } else if (j.contains("function")) {
    ScalarFunction f = ScalarFunction::parse(j.at("function").get<std::string>());
    AlgebraElement arg = parse_element(j.at("of"), ctx);
    if (j.contains("scale")) arg *= j.at("scale").get<double>();
    arg = 0.5 * (arg + adjoint(arg));
    x = functional_calculus(arg.resized(std::min(arg.radius(), ctx.box.radius())), f, ctx.box, ctx.calculus);
  } else if (j.contains("positive")) {
    const Json& p = j.at("positive");
    AlgebraElement y = parse_element(p.at("witness"), ctx);
    x = make_positive(y.resized(y.support_radius()), p.at("constant").get<double>()).value;
  } else {
    throw ConfigError("unrecognised element literal " + j.dump());
  }
  if (j.value("symmetrize", false)) x = 0.5 * (x + adjoint(x));
  return x;
}

TorusMatrix parse_matrix(const Json& j, const LiteralContext& ctx) {
  if (j.is_object() && j.contains("identity")) {
    return TorusMatrix::identity(ctx.geometry, j.at("identity").get<std::size_t>());
  }
  if (j.is_object() && j.contains("diagonal")) {
    std::vector<AlgebraElement> d;
    for (const auto& e : j.at("diagonal")) d.push_back(parse_element(e, ctx));
    return TorusMatrix::diagonal(d);
  }
  if (!j.is_array() || j.empty()) throw ConfigError("matrix literal must be a nonempty array of rows");
  const std::size_t m = j.size();
  std::vector<AlgebraElement> entries;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != m) throw ConfigError("matrix literal must be square");
    for (const auto& e : row) entries.push_back(parse_element(e, ctx));
  }
  return TorusMatrix(m, std::move(entries));
}

OneForm parse_form(const Json& j, const LiteralContext& ctx) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(ctx.geometry.dim())) {
    throw ConfigError("form literal must be an array of n element literals");
  }
  OneForm w;
  for (const auto& e : j) w.components.push_back(parse_element(e, ctx));
  return w;
}

Json to_json(const AlgebraElement& u, double tol) {
  Json terms = Json::array();
  const LatticeBox& box = u.box();
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (std::abs(u[i]) <= tol) continue;
    auto k = box.mode(i);
    terms.push_back({{"k", std::vector<int>(k.begin(), k.end())}, {"c", {u[i].real(), u[i].imag()}}});
  }
  return {{"radius", u.radius()}, {"terms", terms}};
}

Json to_json(const TorusMatrix& h, double tol) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < h.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < h.size(); ++j) row.push_back(to_json(h(i, j), tol));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace nct
