#pragma once

#include <vector>

#include "nctorus/geometry.hpp"

namespace nct {

/// Coefficients of omega = sum_i theta^i omega_i (right-module convention).
struct OneForm {
  std::vector<AlgebraElement> components;
  std::size_t size() const noexcept { return components.size(); }
};

/// Coefficients of X = sum_i X^i d_i.
struct VectorField {
  std::vector<AlgebraElement> components;
  std::size_t size() const noexcept { return components.size(); }
};

/// nu together with nu^{-1}, nu^{1/2}, nu^{-1/2} computed on a calculus box.
struct DensityRoots {
  AlgebraElement nu;
  AlgebraElement nu_inv;
  AlgebraElement sqrt_nu;
  AlgebraElement inv_sqrt_nu;

  static DensityRoots compute(const Density& nu, const LatticeBox& box, const CalculusOptions& opts = {});
};

/// Multipliers of the pairing <omega, zeta>^o_{h,nu}: the dual metric h^{ij} and
/// weighted = nu^{1/2} h^{ij} nu^{1/2}, all on the calculus box.
struct FormMetric {
  TorusMatrix h_inv;
  DensityRoots density;
  TorusMatrix weighted;

  static FormMetric build(const TorusMatrix& h, const Density& nu, const LatticeBox& box,
                          const CalculusOptions& opts = {});
  /// h^{ij} = g^{ij} and nu = nu(g).
  static FormMetric from_metric(const RiemannianMetric& g);
  /// From an already inverted h (skips the inversion).
  static FormMetric from_inverse(const TorusMatrix& h_inv, const Density& nu, const LatticeBox& box,
                                 const CalculusOptions& opts = {});
};

// All products below are exact (support grows); multipliers carry the truncation of their box.

/// du = sum_i theta^i d_i(u).
OneForm differential(const AlgebraElement& u);
/// (a omega)_i = a omega_i.
OneForm left_action(const AlgebraElement& a, const OneForm& omega);

/// sigma_nu(x) = nu^{1/2} x nu^{-1/2}.
AlgebraElement modular_automorphism(const DensityRoots& nu, const AlgebraElement& x);
OneForm modular_automorphism(const DensityRoots& nu, const OneForm& omega);

/// <omega, zeta>^o_{h,nu} = sum_{ij} tau(zeta_i^* nu^{1/2} h^{ij} nu^{1/2} omega_j).
Complex form_inner_product(const OneForm& omega, const OneForm& zeta, const FormMetric& metric);
/// <omega, zeta>'_h = sum_{ij} zeta_i^* h^{ij} omega_j (algebra-valued).
AlgebraElement dual_metric_pairing(const OneForm& omega, const OneForm& zeta, const TorusMatrix& h_inv);

/// div_nu(X) = sum_i d_i(X^i nu) nu^{-1}.
AlgebraElement divergence_vector_field(const VectorField& x, const DensityRoots& nu);
/// grad(u) . X = sum_i d_i(u) X^i.
AlgebraElement gradient_pairing(const AlgebraElement& u, const VectorField& x);
/// u X = sum_i (u X^i) d_i.
VectorField left_action(const AlgebraElement& u, const VectorField& x);

/// delta(omega) = nu^{-1} sum_{ij} d_i(nu^{1/2} h^{ij} nu^{1/2} omega_j).
AlgebraElement divergence_one_form(const OneForm& omega, const FormMetric& metric);

/// X_omega^h = sum_{ij} omega_j^* h^{ji} d_i.
VectorField dual_vector_field(const OneForm& omega, const TorusMatrix& h_inv);
/// X_omega^{h,nu} = sum_{ij} omega_j^* nu^{1/2} h^{ji} nu^{-1/2} d_i.
VectorField weighted_dual_vector_field(const OneForm& omega, const FormMetric& metric);

/// -delta(d u).
AlgebraElement apply_laplacian(const AlgebraElement& u, const FormMetric& metric);

}  // namespace nct
