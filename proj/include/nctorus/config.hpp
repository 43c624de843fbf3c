#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nctorus/literal_io.hpp"
#include "nctorus/laplacian.hpp"

namespace nct {

struct Tolerances {
  double asymmetry = 1e-6;
  double stability_rel = 1e-3;
  double multiplicity = 1e-6;
  double kernel = 1e-8;
  double green = 1e-9;
  double adjointness = 1e-10;
  double conformal = 1e-8;
  double determinant = 1e-8;
  double oracle_algebraic = 1e-12;
  double oracle = 1e-8;
};

/// Run configuration read from JSON:
/// {
///   "geometry": {...}, "box_radius": N, "multiplier_radius": M, "calculus_radius": R,
///   "stability_radius": N', "metric": {...}, "density": lit, "conformal_factor": lit,
///   "tolerances": {...}, "seed": s, "count": c, "window": [a, b], "quadrature_points": q,
///   "determinant": {"h": mat, "h_prime": mat, "u": mat}
/// }
/// Metric specs: {"type": "flat"}, {"type": "conformal", "k": lit, "base": spec},
/// {"type": "product", "blocks": [spec | {"type": "scalar", "value": lit}, ...]}, {"type": "explicit", "entries": mat},
/// {"type": "functional", "h": lit, "entries": [[{"poly": [c0, c1, ...], "exp": s}, ...], ...],
///  "domain": [lo, hi]} with g_ij(t) = poly_ij(t) exp(s_ij t).
struct RunConfig {
  TorusGeometry geometry = TorusGeometry::plane(0.0);
  int box_radius = 8;
  int multiplier_radius = 2;
  int calculus_radius = 0;  // <= 0: max(N + 2M, 4M)
  int stability_radius = 0; // <= 0: N + 2
  Json metric = {{"type", "flat"}};
  std::optional<Json> density;
  std::optional<Json> conformal_factor;
  std::optional<Json> determinant;
  Tolerances tolerances;
  std::uint64_t seed = 1;
  std::size_t count = 50;
  std::size_t window_first = 20;
  std::size_t window_last = 100;
  int quadrature_points = 32;

  static RunConfig from_json(const Json& j);
  static RunConfig load(const std::string& path);

  int effective_calculus_radius() const;
  LatticeBox box() const { return {geometry.dim(), box_radius}; }
  LatticeBox calculus_box() const { return {geometry.dim(), effective_calculus_radius()}; }
  LiteralContext context() const { return {geometry, calculus_box(), {}}; }
  AssemblyOptions assembly() const;
};

RiemannianMetric build_metric(const Json& spec, const LiteralContext& ctx, const MetricValidationOptions& opts = {});

/// The operator described by a configuration: Riemannian (h = g, nu = nu(g)) unless a density
/// override is present, in which case h is the metric matrix and nu the given element.
LaplaceBeltramiOperator build_operator(const RunConfig& cfg);

}  // namespace nct
