#include "nctorus/geometry.hpp"

#include <cmath>
#include <numbers>

#include "nctorus/eigensolver.hpp"
#include "nctorus/error.hpp"

namespace nct {

namespace {

TorusMatrix trimmed(const TorusMatrix& a) { return a.resized(a.support_radius()); }

double identity_residual(const TorusMatrix& p, int radius) {
  TorusMatrix id = TorusMatrix::identity(p.geometry(), p.size(), 0);
  return max_abs_diff_within(p, id, radius);
}

}  // namespace

std::pair<MetricValidation, std::optional<TorusMatrix>> RiemannianMetric::run(const TorusMatrix& g,
                                                                              const LatticeBox& box,
                                                                              const MetricValidationOptions& opts) {
  MetricValidation v;
  if (box.dim() != g.geometry().dim()) throw GeometryMismatch("box dimension differs from the torus dimension");
  v.entry_selfadjoint_residual = entry_selfadjoint_residual(g);
  if (v.entry_selfadjoint_residual > opts.selfadjoint_tol) {
    v.failure = "entries of g are not selfadjoint";
    return {v, std::nullopt};
  }
  double sym = selfadjoint_residual(g);
  if (sym > opts.selfadjoint_tol) {
    v.failure = "g is not a selfadjoint matrix";
    return {v, std::nullopt};
  }
  TorusMatrix g_box = g.resized(box.radius());
  std::optional<TorusMatrix> g_inv;
  try {
    g_inv = nct::inverse(g_box, box, opts.calculus);
    v.positive = true;
  } catch (const SpectralFloorViolation& e) {
    v.failure = "g is not positive invertible: " + std::string(e.what());
    return {v, std::nullopt};
  }
  int rg = g_box.support_radius();
  const int interior = std::max(0, box.radius() - rg);
  for (const auto& e : g_inv->entries()) {
    v.inverse_entry_selfadjoint_residual =
        std::max(v.inverse_entry_selfadjoint_residual, max_abs_diff_within(e, adjoint(e), interior));
  }
  TorusMatrix product = multiply_to_radius(trimmed(g_box), *g_inv, box.radius());
  v.inverse_residual = identity_residual(product, interior);
  if (v.inverse_entry_selfadjoint_residual > opts.selfadjoint_tol) {
    v.failure = "entries of g^{-1} are not selfadjoint";
  } else if (v.inverse_residual > opts.inverse_tol) {
    v.failure = "g g^{-1} differs from the identity on interior modes";
  } else {
    v.valid = true;
  }
  return {v, g_inv};
}

MetricValidation RiemannianMetric::inspect(const TorusMatrix& g, const LatticeBox& box,
                                           const MetricValidationOptions& opts) {
  return run(g, box, opts).first;
}

RiemannianMetric RiemannianMetric::validate(const TorusMatrix& g, const LatticeBox& box,
                                            const MetricValidationOptions& opts) {
  auto [report, g_inv] = run(g, box, opts);
  if (!report.valid) throw InvalidMetric("invalid Riemannian metric: " + report.failure);
  // The stored inverse is symmetrised entrywise; the residual above bounds the change.
  TorusMatrix inv = *g_inv;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    for (std::size_t j = 0; j < inv.size(); ++j) {
      const AlgebraElement& e = (*g_inv)(i, j);
      inv.set(i, j, 0.5 * (e + adjoint(e)));
    }
  }
  return RiemannianMetric(g.resized(box.radius()), std::move(inv), report, box, opts);
}

Density Density::from_element(const AlgebraElement& nu, const LatticeBox& box, const CalculusOptions& opts) {
  double r = selfadjoint_residual(nu);
  if (r > opts.selfadjoint_tol * std::max(1.0, max_abs(nu))) {
    throw PositivityViolation("density is not selfadjoint (residual " + std::to_string(r) + ")");
  }
  TorusMatrix x = TorusMatrix::from_element(nu.resized(std::min(nu.radius(), box.radius())));
  CompressedOperator op = compress_on_modes(x, box, reachable_modes(x, box));
  Eigen::MatrixXcd c = 0.5 * (op.matrix + op.matrix.adjoint());
  if (!positive_definite_above(c, opts.spectral_floor)) {
    throw PositivityViolation("density is not positive invertible (compressed spectrum below floor)");
  }
  return Density(nu, DensityOrigin::explicit_density);
}

RiemannianMetric metric_flat(const TorusGeometry& g, const LatticeBox& box, const MetricValidationOptions& opts) {
  return RiemannianMetric::validate(TorusMatrix::identity(g, static_cast<std::size_t>(g.dim()), 0), box, opts);
}

RiemannianMetric metric_conformal(const RiemannianMetric& base, const AlgebraElement& k,
                                  const MetricValidationOptions& opts) {
  const LatticeBox& box = base.box();
  try {
    Density::from_element(k, box, opts.calculus);
  } catch (const PositivityViolation& e) {
    throw PositivityViolation(std::string("conformal factor: ") + e.what());
  }
  AlgebraElement kt = k.resized(std::min(k.radius(), box.radius()));
  kt = kt.resized(kt.support_radius());
  const TorusMatrix& g = base.matrix();
  TorusMatrix out(g.geometry(), g.size(), box.radius());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      AlgebraElement e = g(i, j).resized(g(i, j).support_radius());
      out.set(i, j, multiply_to_radius(multiply(kt, e), kt, box.radius()));
    }
  }
  return RiemannianMetric::validate(out, box, opts);
}

RiemannianMetric metric_product(const std::vector<RiemannianMetric>& blocks, const MetricValidationOptions& opts) {
  if (blocks.empty()) throw Error("product metric needs at least one block");
  std::vector<TorusMatrix> mats;
  for (const auto& b : blocks) mats.push_back(b.matrix());
  double compat = 0.0;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) compat = std::max(compat, compatibility_residual(mats[i], mats[j]));
  }
  RiemannianMetric g = RiemannianMetric::validate(TorusMatrix::block_diagonal(mats), blocks.front().box(), opts);
  g.report_.block_compatibility_residual = compat;
  return g;
}

RiemannianMetric metric_functional(const AlgebraElement& h, const MatrixFunction& g_of_t, const LatticeBox& box,
                                   const MetricValidationOptions& opts) {
  if (!g_of_t.value) throw Error("functional metric needs a matrix function");
  AlgebraElement hb = h.resized(std::min(h.radius(), box.radius()));
  SpectralDecomposition dec(hb, box, opts.calculus);
  const Eigen::VectorXd& ev = dec.eigenvalues();
  if (ev(0) < g_of_t.domain_min || ev(ev.size() - 1) > g_of_t.domain_max) {
    throw SpectrumOutsideDomain("compressed spectrum [" + std::to_string(ev(0)) + ", " +
                                std::to_string(ev(ev.size() - 1)) + "] leaves the domain of the metric function");
  }
  const std::size_t m = g_of_t.size;
  std::vector<Eigen::MatrixXd> samples;
  samples.reserve(static_cast<std::size_t>(ev.size()));
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    Eigen::MatrixXd s = g_of_t.value(ev(i));
    if (static_cast<std::size_t>(s.rows()) != m || static_cast<std::size_t>(s.cols()) != m) {
      throw Error("metric function returned a matrix of the wrong size");
    }
    if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, s.cwiseAbs().maxCoeff())) {
      throw InvalidMetric("metric function is not symmetric at t = " + std::to_string(ev(i)));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(s);
    if (llt.info() != Eigen::Success) {
      throw SpectrumOutsideDomain("metric function is not positive definite at t = " + std::to_string(ev(i)));
    }
    samples.push_back(std::move(s));
  }
  TorusMatrix g(h.geometry(), m, box.radius());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      Eigen::VectorXcd column(ev.size());
      for (std::size_t r = 0; r < samples.size(); ++r) {
        column(static_cast<Eigen::Index>(r)) = samples[r](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
      AlgebraElement e = dec.apply_values(column)(0, 0);
      e = 0.5 * (e + adjoint(e));
      g.set(i, j, e);
      if (i != j) g.set(j, i, e);
    }
  }
  return RiemannianMetric::validate(g, box, opts);
}

Density riemannian_density(const RiemannianMetric& g) {
  const LatticeBox& box = g.box();
  const CalculusOptions& c = g.options().calculus;
  TorusMatrix log_g = functional_calculus(g.matrix(), ScalarFunction::log(), box, c);
  AlgebraElement half_trace = 0.5 * matrix_trace(log_g);
  half_trace = 0.5 * (half_trace + adjoint(half_trace));
  return Density(functional_calculus(half_trace, ScalarFunction::exp(), box, c), DensityOrigin::riemannian);
}

Complex weight(const Density& nu, const AlgebraElement& u) {
  double scale = std::pow(2.0 * std::numbers::pi, u.geometry().dim());
  return scale * trace_of_product(u, nu.element());
}

double volume(const Density& nu) {
  const AlgebraElement& e = nu.element();
  return std::pow(2.0 * std::numbers::pi, e.geometry().dim()) * trace(e).real();
}

double volume(const RiemannianMetric& g) { return volume(riemannian_density(g)); }

OrthogonalInvarianceReport orthogonal_invariance_check(const RiemannianMetric& g, const TorusMatrix& u, double tol) {
  if (u.size() != g.size()) throw Error("orthogonal matrix has the wrong size");
  double sa = entry_selfadjoint_residual(u);
  if (sa > tol) throw HypothesisViolated("u has selfadjoint entries", sa);
  double sc = self_compatibility_residual(u);
  if (sc > tol) throw HypothesisViolated("u self-compatible", sc);
  double cg = compatibility_residual(u, g.matrix());
  if (cg > tol) throw HypothesisViolated("u and g compatible", cg);

  const LatticeBox& box = g.box();
  const int R = box.radius();
  TorusMatrix ut = transpose(trimmed(u));
  TorusMatrix ut_u = multiply_to_radius(ut, trimmed(u), R);
  TorusMatrix u_ut = multiply_to_radius(trimmed(u), ut, R);

  OrthogonalInvarianceReport report;
  report.orthogonality_residual =
      std::max(identity_residual(ut_u, R), identity_residual(u_ut, R));
  report.orthogonal = report.orthogonality_residual <= tol;

  TorusMatrix conj = multiply_to_radius(multiply(ut, trimmed(g.matrix())), trimmed(u), R);
  // Symmetrise away rounding before validating the conjugated metric.
  conj = 0.5 * (conj + adjoint(conj));
  RiemannianMetric g2 = RiemannianMetric::validate(conj, box, g.options());
  Density nu_g = riemannian_density(g);
  Density nu_g2 = riemannian_density(g2);
  RiemannianMetric utu_metric = RiemannianMetric::validate(0.5 * (ut_u + adjoint(ut_u)), box, g.options());
  Density nu_utu = riemannian_density(utu_metric);
  report.density_product_residual =
      max_abs_diff(nu_g2.element(), multiply_to_radius(nu_utu.element(), nu_g.element(), R));
  report.density_residual = max_abs_diff(nu_g2.element(), nu_g.element());
  report.volume_residual = std::abs(volume(nu_g2) - volume(nu_g));
  return report;
}

}  // namespace nct
