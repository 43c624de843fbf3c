#pragma once

#include <json.hpp>

#include "nctorus/forms.hpp"

namespace nct {

using Json = nlohmann::json;

/// Geometry: {"n": 2, "theta": 0.5} (plane) or {"n": n, "theta": [[...], ...]} (full antisymmetric
/// matrix).  A scalar theta for n > 2 fills every upper entry.
TorusGeometry parse_geometry(const Json& j);
Json to_json(const TorusGeometry& g);

/// Box and calculus options used when a literal asks for functional calculus.
struct LiteralContext {
  TorusGeometry geometry;
  LatticeBox box;
  CalculusOptions calculus;
};

/// Element literals:
///   number                                   scalar multiple of 1
///   [re, im]                                 complex scalar
///   {"terms": [{"k": [...], "c": number | [re, im]}, ...], "symmetrize": bool}
///   {"sum": [lit, ...]}, {"product": [lit, ...]}
///   {"function": "exp" | "sqrt" | "log" | "inv" | "inv_sqrt" | "pow(s)", "of": lit, "scale": t}
///   {"positive": {"witness": lit, "constant": c}}   y^* y + c
/// "symmetrize" replaces x by (x + x^*) / 2.
AlgebraElement parse_element(const Json& j, const LiteralContext& ctx);
/// Array of rows of element literals, {"identity": m}, or {"diagonal": [lit, ...]}.
TorusMatrix parse_matrix(const Json& j, const LiteralContext& ctx);
/// Array of n element literals.
OneForm parse_form(const Json& j, const LiteralContext& ctx);

/// {"radius": r, "terms": [{"k": [...], "c": [re, im]}]} listing coefficients above tol.
Json to_json(const AlgebraElement& u, double tol = 0.0);
Json to_json(const TorusMatrix& h, double tol = 0.0);

}  // namespace nct
