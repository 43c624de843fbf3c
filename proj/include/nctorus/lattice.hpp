#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace nct {

using Complex = std::complex<double>;

// Largest supported torus dimension; table sizes grow like (2N+1)^n.
inline constexpr int kMaxDimension = 6;

namespace detail {
struct PhaseCache;
}

/// Dimension n and the real antisymmetric deformation matrix theta (row-major n x n).
class TorusGeometry {
 public:
  TorusGeometry(int n, std::vector<double> theta);

  /// n = 2 with theta_12 = t, theta_21 = -t.
  static TorusGeometry plane(double t);
  static TorusGeometry commutative(int n);

  int dim() const noexcept { return n_; }
  double theta(int j, int k) const noexcept { return theta_[static_cast<std::size_t>(j * n_ + k)]; }
  const std::vector<double>& theta_matrix() const noexcept { return theta_; }
  bool is_commutative() const noexcept;

  /// FNV-1a digest of n and the bit patterns of theta.
  std::uint64_t digest() const noexcept;

  /// sigma(p, q) = exp(i pi q^T theta p).
  Complex cocycle(std::span<const int> p, std::span<const int> q) const;

  /// Phase tables exp(i pi theta_jl m) for |m| <= range, one per pair j < l.
  /// The returned object stays valid for as long as it is held.
  std::shared_ptr<const std::vector<std::vector<Complex>>> phase_tables(int range) const;

  friend bool operator==(const TorusGeometry& a, const TorusGeometry& b) noexcept {
    return a.n_ == b.n_ && a.theta_ == b.theta_;
  }

 private:
  int n_;
  std::vector<double> theta_;
  std::shared_ptr<detail::PhaseCache> cache_;
};

/// Evaluates sigma(p, q) from memoized tables; p and q must satisfy |q_j p_l - q_l p_j| <= range.
class CocycleEvaluator {
 public:
  CocycleEvaluator(const TorusGeometry& geometry, int range);
  Complex operator()(const int* p, const int* q) const noexcept;

 private:
  int n_;
  int range_;
  std::shared_ptr<const std::vector<std::vector<Complex>>> tables_;
};

/// B_N = { k in Z^n : |k_i| <= N }.  Enumeration is row-major with the last axis fastest:
/// index(k) = sum_i (k_i + N) (2N+1)^(n-1-i).
class LatticeBox {
 public:
  LatticeBox(int n, int radius);

  int dim() const noexcept { return n_; }
  int radius() const noexcept { return radius_; }
  int side() const noexcept { return 2 * radius_ + 1; }
  std::size_t size() const noexcept { return size_; }

  bool contains(std::span<const int> k) const noexcept;
  std::size_t index_of(std::span<const int> k) const noexcept;
  /// Coordinates of the mode at idx (a view into a shared table).
  std::span<const int> mode(std::size_t idx) const noexcept {
    return {coords_->data() + idx * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  const int* mode_ptr(std::size_t idx) const noexcept { return coords_->data() + idx * static_cast<std::size_t>(n_); }
  std::size_t center_index() const noexcept { return (size_ - 1) / 2; }
  /// Index of -k for the mode at idx.
  std::size_t negated_index(std::size_t idx) const noexcept { return size_ - 1 - idx; }
  /// max_i |k_i| of the mode at idx.
  int shell(std::size_t idx) const noexcept;

  friend bool operator==(const LatticeBox& a, const LatticeBox& b) noexcept {
    return a.n_ == b.n_ && a.radius_ == b.radius_;
  }

 private:
  int n_;
  int radius_;
  std::size_t size_;
  std::shared_ptr<const std::vector<int>> coords_;
};

}  // namespace nct
