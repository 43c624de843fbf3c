#include "nctorus/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nctorus/error.hpp"

namespace nct::oracle {

namespace {

void require_commutative(const TorusGeometry& g) {
  if (!g.is_commutative()) throw NonzeroTheta("the grid oracle needs theta = 0");
}

void require_resolved(int radius, int grid_size) {
  if (grid_size < 2 * radius + 1) {
    throw AliasingRisk("grid of " + std::to_string(grid_size) + " points cannot resolve modes of radius " +
                       std::to_string(radius));
  }
}

std::size_t grid_points(int n, int size) {
  std::size_t p = 1;
  for (int i = 0; i < n; ++i) p *= static_cast<std::size_t>(size);
  return p;
}

// table[m + radius][j] = exp(sign * i m x_j)
std::vector<std::vector<Complex>> exponentials(int radius, int size, double sign) {
  std::vector<std::vector<Complex>> t(static_cast<std::size_t>(2 * radius + 1),
                                      std::vector<Complex>(static_cast<std::size_t>(size)));
  for (int m = -radius; m <= radius; ++m) {
    for (int j = 0; j < size; ++j) {
      double a = sign * 2.0 * std::numbers::pi * static_cast<double>(m) * j / size;
      t[static_cast<std::size_t>(m + radius)][static_cast<std::size_t>(j)] = {std::cos(a), std::sin(a)};
    }
  }
  return t;
}

void grid_coordinates(std::size_t p, int n, int size, std::vector<int>& out) {
  for (int i = n - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(p % static_cast<std::size_t>(size));
    p /= static_cast<std::size_t>(size);
  }
}

Eigen::MatrixXd matrix_at(const std::vector<Grid>& entries, std::size_t m, std::size_t p) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entries[i * m + j].values[p].real();
  }
  return 0.5 * (a + a.transpose());
}

std::vector<Grid> sample_entries(const TorusMatrix& h, int grid_size) {
  std::vector<Grid> out;
  for (const auto& e : h.entries()) out.push_back(to_grid(e.resized(e.support_radius()), grid_size));
  return out;
}

}  // namespace

int product_grid_size(int r_u, int r_v) {
  return std::max(2 * (r_u + r_v) + 1, 4 * std::max({r_u, r_v, 1}));
}

Grid to_grid(const AlgebraElement& u, int grid_size) {
  const TorusGeometry& g = u.geometry();
  require_commutative(g);
  const int r = u.radius();
  require_resolved(r, grid_size);
  const int n = g.dim();
  auto e = exponentials(r, grid_size, 1.0);
  Grid out{n, grid_size, std::vector<Complex>(grid_points(n, grid_size))};
  std::vector<int> x(static_cast<std::size_t>(n));
  const LatticeBox& box = u.box();
  for (std::size_t p = 0; p < out.values.size(); ++p) {
    grid_coordinates(p, n, grid_size, x);
    Complex s = 0.0;
    for (std::size_t idx = 0; idx < box.size(); ++idx) {
      Complex c = u[idx];
      if (c == Complex{}) continue;
      const int* k = box.mode_ptr(idx);
      for (int i = 0; i < n; ++i) c *= e[static_cast<std::size_t>(k[i] + r)][static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
      s += c;
    }
    out.values[p] = s;
  }
  return out;
}

AlgebraElement from_grid(const Grid& samples, const TorusGeometry& g, int radius) {
  require_commutative(g);
  require_resolved(radius, samples.size);
  const int n = samples.dim;
  if (g.dim() != n) throw GeometryMismatch("grid dimension differs from the torus dimension");
  auto e = exponentials(radius, samples.size, -1.0);
  AlgebraElement u(g, radius);
  const LatticeBox& box = u.box();
  std::vector<int> x(static_cast<std::size_t>(n));
  const double scale = 1.0 / static_cast<double>(samples.points());
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const int* k = box.mode_ptr(idx);
    Complex s = 0.0;
    for (std::size_t p = 0; p < samples.points(); ++p) {
      grid_coordinates(p, n, samples.size, x);
      Complex c = samples.values[p];
      for (int i = 0; i < n; ++i) c *= e[static_cast<std::size_t>(k[i] + radius)][static_cast<std::size_t>(x[static_cast<std::size_t>(i)])];
      s += c;
    }
    u[idx] = s * scale;
  }
  return u;
}

Grid pointwise(const Grid& a, const Grid& b, const std::function<Complex(Complex, Complex)>& op) {
  if (a.size != b.size || a.dim != b.dim) throw Error("grids differ in shape");
  Grid out = a;
  for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] = op(a.values[p], b.values[p]);
  return out;
}

Grid pointwise(const Grid& a, const std::function<Complex(Complex)>& op) {
  Grid out = a;
  for (auto& v : out.values) v = op(v);
  return out;
}

AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v) {
  const int G = product_grid_size(u.radius(), v.radius());
  Grid p = pointwise(to_grid(u, G), to_grid(v, G), [](Complex a, Complex b) { return a * b; });
  return from_grid(p, u.geometry(), u.radius() + v.radius());
}

AlgebraElement funcalc(const AlgebraElement& u, const std::function<double(double)>& f, int radius, int grid_size) {
  Grid s = pointwise(to_grid(u, grid_size), [&f](Complex z) { return Complex(f(z.real()), 0.0); });
  return from_grid(s, u.geometry(), radius);
}

TorusMatrix matrix_funcalc(const TorusMatrix& h, const std::function<double(double)>& f, int radius,
                           int grid_size) {
  const std::size_t m = h.size();
  std::vector<Grid> entries = sample_entries(h, grid_size);
  std::vector<Grid> out(m * m, entries.front());
  for (std::size_t p = 0; p < entries.front().points(); ++p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(matrix_at(entries, m, p));
    Eigen::VectorXd fv = es.eigenvalues().unaryExpr(f);
    Eigen::MatrixXd r = es.eigenvectors() * fv.asDiagonal() * es.eigenvectors().transpose();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) out[i * m + j].values[p] = r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  std::vector<AlgebraElement> e;
  for (const auto& gr : out) e.push_back(from_grid(gr, h.geometry(), radius));
  return TorusMatrix(m, std::move(e));
}

AlgebraElement det(const TorusMatrix& h, int radius, int grid_size) {
  const std::size_t m = h.size();
  std::vector<Grid> entries = sample_entries(h, grid_size);
  Grid out = entries.front();
  for (std::size_t p = 0; p < out.points(); ++p) out.values[p] = matrix_at(entries, m, p).determinant();
  return from_grid(out, h.geometry(), radius);
}

AlgebraElement density(const TorusMatrix& g, int radius, int grid_size) {
  const std::size_t m = g.size();
  std::vector<Grid> entries = sample_entries(g, grid_size);
  Grid out = entries.front();
  for (std::size_t p = 0; p < out.points(); ++p) out.values[p] = std::sqrt(matrix_at(entries, m, p).determinant());
  return from_grid(out, g.geometry(), radius);
}

AlgebraElement laplacian(const TorusMatrix& h, const AlgebraElement& nu, const AlgebraElement& u, int radius,
                         int grid_size) {
  const TorusGeometry& g = u.geometry();
  const int n = g.dim();
  if (h.size() != static_cast<std::size_t>(n)) throw GeometryMismatch("metric must be n x n");
  require_resolved(radius, grid_size);
  std::vector<Grid> entries = sample_entries(h, grid_size);
  Grid nu_grid = to_grid(nu.resized(nu.support_radius()), grid_size);
  const std::size_t points = nu_grid.points();

  // Pointwise nu h^{-1}.
  std::vector<Grid> weighted(static_cast<std::size_t>(n * n), nu_grid);
  for (std::size_t p = 0; p < points; ++p) {
    Eigen::MatrixXd hi = matrix_at(entries, static_cast<std::size_t>(n), p).inverse();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        weighted[static_cast<std::size_t>(i * n + j)].values[p] = nu_grid.values[p].real() * hi(i, j);
      }
    }
  }
  std::vector<Grid> du;
  for (int j = 0; j < n; ++j) du.push_back(to_grid(derivation(u, j), grid_size));

  // Intermediate fluxes keep every mode the grid resolves; only the final result is clipped.
  const int full = (grid_size - 1) / 2;
  AlgebraElement div = AlgebraElement::zero(g, full);
  for (int i = 0; i < n; ++i) {
    Grid flux = nu_grid;
    for (std::size_t p = 0; p < points; ++p) {
      Complex s = 0.0;
      for (int j = 0; j < n; ++j) s += weighted[static_cast<std::size_t>(i * n + j)].values[p] * du[static_cast<std::size_t>(j)].values[p];
      flux.values[p] = s;
    }
    div += derivation(from_grid(flux, g, full), i);
  }
  Grid d = to_grid(div, grid_size);
  for (std::size_t p = 0; p < points; ++p) d.values[p] = -d.values[p] / nu_grid.values[p].real();
  return from_grid(d, g, radius);
}

std::vector<double> flat_spectrum(int n, int radius) {
  LatticeBox box(n, radius);
  std::vector<double> out;
  out.reserve(box.size());
  for (std::size_t idx = 0; idx < box.size(); ++idx) {
    const int* k = box.mode_ptr(idx);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(k[i]) * k[i];
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace nct::oracle
