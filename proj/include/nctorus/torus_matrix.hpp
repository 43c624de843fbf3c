#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "nctorus/algebra.hpp"

namespace nct {

/// m x m matrix over the algebra.  All entries share geometry and box radius.
class TorusMatrix {
 public:
  /// m x m zero matrix on the given radius.
  TorusMatrix(const TorusGeometry& g, std::size_t m, int radius = 0);
  /// Row-major entries; radii are padded to the largest one.
  TorusMatrix(std::size_t m, std::vector<AlgebraElement> entries);

  static TorusMatrix identity(const TorusGeometry& g, std::size_t m, int radius = 0);
  static TorusMatrix diagonal(const std::vector<AlgebraElement>& d);
  /// Matrix with constant entries c_ij * 1.
  static TorusMatrix constant(const TorusGeometry& g, const Eigen::MatrixXcd& c, int radius = 0);
  static TorusMatrix from_element(const AlgebraElement& x) { return TorusMatrix(1, {x}); }
  static TorusMatrix block_diagonal(const std::vector<TorusMatrix>& blocks);

  std::size_t size() const noexcept { return m_; }
  const TorusGeometry& geometry() const noexcept { return entries_.front().geometry(); }
  int radius() const noexcept { return entries_.front().radius(); }
  const AlgebraElement& operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * m_ + j]; }
  /// Replaces an entry; radii are re-normalised.
  void set(std::size_t i, std::size_t j, const AlgebraElement& x);
  const std::vector<AlgebraElement>& entries() const noexcept { return entries_; }

  TorusMatrix resized(int r) const;
  int support_radius(double tol = 0.0) const noexcept;

  TorusMatrix& operator+=(const TorusMatrix& b);
  TorusMatrix& operator-=(const TorusMatrix& b);
  TorusMatrix& operator*=(Complex c);

 private:
  std::size_t m_;
  std::vector<AlgebraElement> entries_;
  void normalise_radius();
};

TorusMatrix operator+(TorusMatrix a, const TorusMatrix& b);
TorusMatrix operator-(TorusMatrix a, const TorusMatrix& b);
TorusMatrix operator*(Complex c, TorusMatrix a);

TorusMatrix multiply(const TorusMatrix& a, const TorusMatrix& b, ProductMode mode = ProductMode::exact);
TorusMatrix multiply_to_radius(const TorusMatrix& a, const TorusMatrix& b, int radius);
/// Entrywise left multiplication x a.
TorusMatrix scale_left(const AlgebraElement& x, const TorusMatrix& a, ProductMode mode = ProductMode::exact);
/// (a^*)_ij = (a_ji)^*.
TorusMatrix adjoint(const TorusMatrix& a);
/// (a^t)_ij = a_ji (no involution on entries).
TorusMatrix transpose(const TorusMatrix& a);

/// Tr(h) = sum_i h_ii.  Not tracial on matrices over a noncommutative algebra.
AlgebraElement matrix_trace(const TorusMatrix& h);

double max_abs_diff(const TorusMatrix& a, const TorusMatrix& b);
double max_abs_diff_within(const TorusMatrix& a, const TorusMatrix& b, int radius);
/// max |a_ij - (a_ji)^*| over entries and modes.
double selfadjoint_residual(const TorusMatrix& a) noexcept;
bool is_selfadjoint(const TorusMatrix& a, double tol = 0.0) noexcept;
/// max |(a_ij)_k - conj((a_ij)_{-k})|: entries are selfadjoint elements.
double entry_selfadjoint_residual(const TorusMatrix& a) noexcept;

/// Largest commutator coefficient between entries of a and entries of b (exact products).
double compatibility_residual(const TorusMatrix& a, const TorusMatrix& b);
/// Largest commutator coefficient among the entries of a.
double self_compatibility_residual(const TorusMatrix& a);
bool is_self_compatible(const TorusMatrix& a, double tol = 1e-12);
bool are_compatible(const TorusMatrix& a, const TorusMatrix& b, double tol = 1e-12);
/// Largest coefficient of ab - ba as matrices.
double commutation_residual(const TorusMatrix& a, const TorusMatrix& b);

}  // namespace nct
