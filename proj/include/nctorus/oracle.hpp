#pragma once

#include <functional>
#include <vector>

#include "nctorus/torus_matrix.hpp"

namespace nct::oracle {

/// Samples f(x) on the uniform grid x_j = 2 pi j / G of the commutative n-torus, row-major
/// (last axis fastest).
struct Grid {
  int dim = 2;
  int size = 0;  // points per axis
  std::vector<Complex> values;

  std::size_t points() const noexcept { return values.size(); }
};

/// Smallest grid size that samples products of elements of radius r_u, r_v without aliasing,
/// with 4x oversampling of the largest radius.
int product_grid_size(int r_u, int r_v);

/// Throws NonzeroTheta unless u lives on a commutative torus, AliasingRisk if G < 2 r + 1.
Grid to_grid(const AlgebraElement& u, int grid_size);
/// Discrete Fourier inversion onto the box of the given radius (AliasingRisk if G < 2 radius + 1).
AlgebraElement from_grid(const Grid& samples, const TorusGeometry& g, int radius);

Grid pointwise(const Grid& a, const Grid& b, const std::function<Complex(Complex, Complex)>& op);
Grid pointwise(const Grid& a, const std::function<Complex(Complex)>& op);

/// Product by pointwise multiplication; result on radius r_u + r_v.
AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v);
/// f applied to the (real) samples of a selfadjoint u; coefficients up to `radius`.
AlgebraElement funcalc(const AlgebraElement& u, const std::function<double(double)>& f, int radius,
                       int grid_size);
/// Entrywise result of f applied pointwise to the symmetric matrix field h(x).
TorusMatrix matrix_funcalc(const TorusMatrix& h, const std::function<double(double)>& f, int radius,
                           int grid_size);
/// Pointwise classical determinant.
AlgebraElement det(const TorusMatrix& h, int radius, int grid_size);
/// Pointwise sqrt(det g).
AlgebraElement density(const TorusMatrix& g, int radius, int grid_size);

/// -nu^{-1} sum_ij d_i(nu h^{ij} d_j u) with h^{ij} the pointwise inverse of h, derivatives by
/// exact Fourier multipliers and coefficients multiplied on the grid.  Result up to `radius`.
AlgebraElement laplacian(const TorusMatrix& h, const AlgebraElement& nu, const AlgebraElement& u, int radius,
                         int grid_size);

/// |k|^2 for k in the box, ascending.
std::vector<double> flat_spectrum(int n, int radius);

}  // namespace nct::oracle
