#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nctorus/torus_matrix.hpp"

namespace nct {

/// Dense matrix of an operator on span{ e_i (x) V_k : i < blocks, k in modes }.
/// Row/column index of (i, k) is i * modes.size() + position of k in `modes`.
struct CompressedOperator {
  Eigen::MatrixXcd matrix;
  int dim_n = 2;
  int box_radius = 0;
  std::size_t blocks = 1;
  std::vector<std::size_t> modes;  // ascending box indices
  std::string provenance;

  std::size_t block_dim() const noexcept { return modes.size(); }
  /// max |A - A^*| entrywise.
  double hermitian_residual() const;
  /// Position of the box index within `modes`, or npos.
  std::size_t position_of(std::size_t box_index) const noexcept;
};

/// Left multiplication by x on span{V_k : k in box}:  C[k, q] = x_{k-q} sigma(k-q, q).
CompressedOperator compress_left_multiplication(const AlgebraElement& x, const LatticeBox& box);
/// Block version for matrices: block (i, j) is the compression of x_ij.
CompressedOperator compress_left_multiplication(const TorusMatrix& x, const LatticeBox& box);
/// Compression restricted to a subset of box modes (ascending box indices).
CompressedOperator compress_on_modes(const TorusMatrix& x, const LatticeBox& box, std::vector<std::size_t> modes);

/// Box modes reachable from 0 by steps in +-supp(x): the invariant subspace holding the
/// cyclic vector, on which every compression of x and its functions decouples.
std::vector<std::size_t> reachable_modes(const TorusMatrix& x, const LatticeBox& box);

/// Binary cache, little endian:
///   "NCTC" | u32 version=1 | u32 n | u64 theta digest | i32 N | u32 m | u64 mode count |
///   u64 modes[mode count] | f64 (re, im) payload, row-major, (m * mode count)^2 entries.
void write_operator_cache(std::ostream& os, const CompressedOperator& op, const TorusGeometry& g);
/// Throws GeometryMismatch when the stored dimension or digest differs from g.
CompressedOperator read_operator_cache(std::istream& is, const TorusGeometry& g);

}  // namespace nct
