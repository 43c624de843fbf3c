#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nctorus/lattice.hpp"

namespace nct {

/// Truncated Fourier series u = sum_k u_k V_k over a lattice box, in the Weyl basis
/// V_p V_q = sigma(p, q) V_{p+q}, V_k^* = V_{-k}.
class AlgebraElement {
 public:
  AlgebraElement(TorusGeometry geometry, int radius);
  AlgebraElement(TorusGeometry geometry, int radius, std::vector<Complex> coeffs);

  static AlgebraElement zero(const TorusGeometry& g, int radius = 0) { return {g, radius}; }
  static AlgebraElement scalar(const TorusGeometry& g, Complex c, int radius = 0);
  static AlgebraElement identity(const TorusGeometry& g, int radius = 0) { return scalar(g, 1.0, radius); }
  /// c V_k on the smallest box containing k (or on `radius` if larger).
  static AlgebraElement basis(const TorusGeometry& g, std::span<const int> k, Complex c = 1.0, int radius = 0);
  static AlgebraElement basis(const TorusGeometry& g, std::initializer_list<int> k, Complex c = 1.0,
                              int radius = 0) {
    std::vector<int> kk(k);
    return basis(g, kk, c, radius);
  }

  const TorusGeometry& geometry() const noexcept { return geometry_; }
  const LatticeBox& box() const noexcept { return box_; }
  int radius() const noexcept { return box_.radius(); }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// u_k, zero outside the box.
  Complex coeff(std::span<const int> k) const noexcept;
  Complex coeff(std::initializer_list<int> k) const noexcept {
    std::vector<int> kk(k);
    return coeff(kk);
  }
  void set_coeff(std::span<const int> k, Complex c);
  void add_coeff(std::span<const int> k, Complex c);

  Complex operator[](std::size_t idx) const noexcept { return coeffs_[idx]; }
  Complex& operator[](std::size_t idx) noexcept { return coeffs_[idx]; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  std::span<Complex> coeffs() noexcept { return coeffs_; }

  /// Same element on box radius r, padding with zeros or dropping modes outside B_r.
  AlgebraElement resized(int r) const;
  /// Smallest radius whose box contains every coefficient with |u_k| > tol.
  int support_radius(double tol = 0.0) const noexcept;
  bool is_zero(double tol = 0.0) const noexcept;

  AlgebraElement& operator+=(const AlgebraElement& v);
  AlgebraElement& operator-=(const AlgebraElement& v);
  AlgebraElement& operator*=(Complex c);

 private:
  TorusGeometry geometry_;
  LatticeBox box_;
  std::vector<Complex> coeffs_;
};

AlgebraElement operator+(AlgebraElement u, const AlgebraElement& v);
AlgebraElement operator-(AlgebraElement u, const AlgebraElement& v);
AlgebraElement operator-(AlgebraElement u);
AlgebraElement operator*(Complex c, AlgebraElement u);
AlgebraElement operator*(AlgebraElement u, Complex c);

/// exact: result lives on radius N_u + N_v.  truncate: clipped to max(N_u, N_v).
enum class ProductMode { exact, truncate };

/// (uv)_k = sum_{p+q=k} u_p v_q sigma(p, q).  Summation order per output mode is fixed.
AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v, ProductMode mode = ProductMode::exact);
/// Product clipped to an explicit radius (only the needed output modes are computed).
AlgebraElement multiply_to_radius(const AlgebraElement& u, const AlgebraElement& v, int radius);
AlgebraElement commutator(const AlgebraElement& u, const AlgebraElement& v, ProductMode mode = ProductMode::exact);

/// (u*)_k = conj(u_{-k}).
AlgebraElement adjoint(const AlgebraElement& u);
/// (d_j u)_k = i k_j u_k, axis j in [0, n).
AlgebraElement derivation(const AlgebraElement& u, int axis);

/// tau(u) = u_0.
Complex trace(const AlgebraElement& u) noexcept;
/// tau(u v) without forming the product.
Complex trace_of_product(const AlgebraElement& u, const AlgebraElement& v);

/// <u, v> = tau(v^* u).
Complex inner_product(const AlgebraElement& u, const AlgebraElement& v);
/// <u, v>_nu = tau(u nu v^*).
Complex inner_product_nu(const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& nu);
/// <u, v>_nu^o = tau(v^* nu u).
Complex inner_product_nu_opp(const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& nu);

/// (sum_k (1 + |k|^2)^s |u_k|^2)^{1/2}.
double sobolev_norm(const AlgebraElement& u, double s);

/// max_k |u_k - v_k| over the union of both boxes.
double max_abs_diff(const AlgebraElement& u, const AlgebraElement& v);
/// Same, restricted to modes with max_i |k_i| <= radius.
double max_abs_diff_within(const AlgebraElement& u, const AlgebraElement& v, int radius);
double max_abs(const AlgebraElement& u) noexcept;
/// max_k |u_k - conj(u_{-k})|.
double selfadjoint_residual(const AlgebraElement& u) noexcept;
bool is_selfadjoint(const AlgebraElement& u, double tol = 0.0) noexcept;

void require_same_geometry(const AlgebraElement& u, const AlgebraElement& v);

/// Phase c(k) with U^k = U_1^{k_1} ... U_n^{k_n} = c(k) V_k.
Complex ordered_monomial_phase(const TorusGeometry& g, std::span<const int> k);
/// Coefficients a_k of u = sum a_k U^k converted to Weyl-basis coefficients, and back.
AlgebraElement from_ordered_monomials(const AlgebraElement& a);
AlgebraElement to_ordered_monomials(const AlgebraElement& u);

}  // namespace nct
