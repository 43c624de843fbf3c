#include "nctorus/forms.hpp"

#include "nctorus/error.hpp"

namespace nct {

namespace {

AlgebraElement trim(const AlgebraElement& x) { return x.resized(x.support_radius()); }

AlgebraElement symmetrised(const AlgebraElement& x) { return 0.5 * (x + adjoint(x)); }

void require_size(std::size_t got, int n, const char* what) {
  if (got != static_cast<std::size_t>(n)) {
    throw GeometryMismatch(std::string(what) + " must have one component per axis");
  }
}

const TorusGeometry& geometry_of(const OneForm& omega) {
  if (omega.components.empty()) throw GeometryMismatch("empty one-form");
  return omega.components.front().geometry();
}

}  // namespace

DensityRoots DensityRoots::compute(const Density& nu, const LatticeBox& box, const CalculusOptions& opts) {
  const AlgebraElement& x = nu.element();
  AlgebraElement xb = x.resized(std::min(x.radius(), box.radius()));
  SpectralDecomposition dec(xb, box, opts);
  DensityRoots r{trim(x), symmetrised(inverse(xb, box, opts)),
                 symmetrised(dec.apply(ScalarFunction::sqrt())(0, 0)),
                 symmetrised(dec.apply(ScalarFunction::inv_sqrt())(0, 0))};
  return r;
}

FormMetric FormMetric::from_inverse(const TorusMatrix& h_inv, const Density& nu, const LatticeBox& box,
                                    const CalculusOptions& opts) {
  DensityRoots roots = DensityRoots::compute(nu, box, opts);
  const int R = box.radius();
  TorusMatrix hi = h_inv.resized(std::min(h_inv.radius(), R));
  TorusMatrix w(hi.geometry(), hi.size(), R);
  AlgebraElement s = trim(roots.sqrt_nu);
  for (std::size_t i = 0; i < hi.size(); ++i) {
    for (std::size_t j = 0; j < hi.size(); ++j) {
      w.set(i, j, multiply_to_radius(multiply(s, trim(hi(i, j))), s, R));
    }
  }
  return FormMetric{hi, std::move(roots), 0.5 * (w + adjoint(w))};
}

FormMetric FormMetric::build(const TorusMatrix& h, const Density& nu, const LatticeBox& box,
                             const CalculusOptions& opts) {
  TorusMatrix h_inv = inverse(h.resized(std::min(h.radius(), box.radius())), box, opts);
  return from_inverse(0.5 * (h_inv + adjoint(h_inv)), nu, box, opts);
}

FormMetric FormMetric::from_metric(const RiemannianMetric& g) {
  return from_inverse(g.inverse(), riemannian_density(g), g.box(), g.options().calculus);
}

OneForm differential(const AlgebraElement& u) {
  OneForm out;
  for (int i = 0; i < u.geometry().dim(); ++i) out.components.push_back(derivation(u, i));
  return out;
}

OneForm left_action(const AlgebraElement& a, const OneForm& omega) {
  OneForm out;
  AlgebraElement at = trim(a);
  for (const auto& c : omega.components) out.components.push_back(multiply(at, trim(c)));
  return out;
}

AlgebraElement modular_automorphism(const DensityRoots& nu, const AlgebraElement& x) {
  return multiply(multiply(trim(nu.sqrt_nu), trim(x)), trim(nu.inv_sqrt_nu));
}

OneForm modular_automorphism(const DensityRoots& nu, const OneForm& omega) {
  OneForm out;
  for (const auto& c : omega.components) out.components.push_back(modular_automorphism(nu, c));
  return out;
}

Complex form_inner_product(const OneForm& omega, const OneForm& zeta, const FormMetric& metric) {
  const std::size_t n = metric.weighted.size();
  require_size(omega.size(), static_cast<int>(n), "omega");
  require_size(zeta.size(), static_cast<int>(n), "zeta");
  Complex s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    AlgebraElement zi = adjoint(trim(zeta.components[i]));
    for (std::size_t j = 0; j < n; ++j) {
      AlgebraElement a = multiply(trim(metric.weighted(i, j)), trim(omega.components[j]));
      s += trace_of_product(zi, a);
    }
  }
  return s;
}

AlgebraElement dual_metric_pairing(const OneForm& omega, const OneForm& zeta, const TorusMatrix& h_inv) {
  const std::size_t n = h_inv.size();
  require_size(omega.size(), static_cast<int>(n), "omega");
  require_size(zeta.size(), static_cast<int>(n), "zeta");
  AlgebraElement s = AlgebraElement::zero(h_inv.geometry());
  for (std::size_t i = 0; i < n; ++i) {
    AlgebraElement zi = adjoint(trim(zeta.components[i]));
    for (std::size_t j = 0; j < n; ++j) {
      s += multiply(zi, multiply(trim(h_inv(i, j)), trim(omega.components[j])));
    }
  }
  return s;
}

AlgebraElement divergence_vector_field(const VectorField& x, const DensityRoots& nu) {
  if (x.components.empty()) throw GeometryMismatch("empty vector field");
  const TorusGeometry& g = x.components.front().geometry();
  require_size(x.size(), g.dim(), "vector field");
  AlgebraElement nut = trim(nu.nu);
  AlgebraElement s = AlgebraElement::zero(g);
  for (int i = 0; i < g.dim(); ++i) {
    s += derivation(multiply(trim(x.components[static_cast<std::size_t>(i)]), nut), i);
  }
  return multiply(trim(s), trim(nu.nu_inv));
}

AlgebraElement gradient_pairing(const AlgebraElement& u, const VectorField& x) {
  require_size(x.size(), u.geometry().dim(), "vector field");
  AlgebraElement s = AlgebraElement::zero(u.geometry());
  for (int i = 0; i < u.geometry().dim(); ++i) {
    s += multiply(trim(derivation(u, i)), trim(x.components[static_cast<std::size_t>(i)]));
  }
  return s;
}

VectorField left_action(const AlgebraElement& u, const VectorField& x) {
  VectorField out;
  AlgebraElement ut = trim(u);
  for (const auto& c : x.components) out.components.push_back(multiply(ut, trim(c)));
  return out;
}

AlgebraElement divergence_one_form(const OneForm& omega, const FormMetric& metric) {
  const std::size_t n = metric.weighted.size();
  require_size(omega.size(), static_cast<int>(n), "omega");
  const TorusGeometry& g = geometry_of(omega);
  AlgebraElement s = AlgebraElement::zero(g);
  for (std::size_t i = 0; i < n; ++i) {
    AlgebraElement row = AlgebraElement::zero(g);
    for (std::size_t j = 0; j < n; ++j) row += multiply(trim(metric.weighted(i, j)), trim(omega.components[j]));
    s += derivation(row, static_cast<int>(i));
  }
  return multiply(trim(metric.density.nu_inv), trim(s));
}

VectorField dual_vector_field(const OneForm& omega, const TorusMatrix& h_inv) {
  const std::size_t n = h_inv.size();
  require_size(omega.size(), static_cast<int>(n), "omega");
  VectorField out;
  for (std::size_t i = 0; i < n; ++i) {
    AlgebraElement xi = AlgebraElement::zero(h_inv.geometry());
    for (std::size_t j = 0; j < n; ++j) xi += multiply(adjoint(trim(omega.components[j])), trim(h_inv(j, i)));
    out.components.push_back(std::move(xi));
  }
  return out;
}

VectorField weighted_dual_vector_field(const OneForm& omega, const FormMetric& metric) {
  const std::size_t n = metric.h_inv.size();
  require_size(omega.size(), static_cast<int>(n), "omega");
  AlgebraElement s = trim(metric.density.sqrt_nu);
  AlgebraElement si = trim(metric.density.inv_sqrt_nu);
  VectorField out;
  for (std::size_t i = 0; i < n; ++i) {
    AlgebraElement xi = AlgebraElement::zero(metric.h_inv.geometry());
    for (std::size_t j = 0; j < n; ++j) {
      AlgebraElement conj = multiply(multiply(s, trim(metric.h_inv(j, i))), si);
      xi += multiply(adjoint(trim(omega.components[j])), trim(conj));
    }
    out.components.push_back(std::move(xi));
  }
  return out;
}

AlgebraElement apply_laplacian(const AlgebraElement& u, const FormMetric& metric) {
  return -divergence_one_form(differential(u), metric);
}

}  // namespace nct
