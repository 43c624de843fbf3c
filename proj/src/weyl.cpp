#include "nctorus/weyl.hpp"

#include <cmath>
#include <numbers>

#include "nctorus/error.hpp"

namespace nct {

namespace {

// Golub-Welsch: nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_legendre(int m) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    j(i, i - 1) = b;
    j(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd w = 2.0 * es.eigenvectors().row(0).transpose().array().square();
  return {es.eigenvalues(), w};
}

double tau_of_symbol_power(const TorusMatrix& h_inv, const std::vector<double>& xi, const LatticeBox& box,
                           const CalculusOptions& opts) {
  const int n = static_cast<int>(xi.size());
  AlgebraElement q = AlgebraElement::zero(h_inv.geometry());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      q += (xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)]) *
           h_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  q = 0.5 * (q + adjoint(q));
  q = q.resized(std::min(q.radius(), box.radius()));
  ScalarFunction f = n == 2 ? ScalarFunction::inv() : ScalarFunction::pow(-0.5 * n);
  AlgebraElement p = functional_calculus(q, f, box, opts);
  return trace(p).real();
}

double sphere_average(const TorusMatrix& h_inv, const LatticeBox& box, int points, const CalculusOptions& opts) {
  const int n = h_inv.geometry().dim();
  if (points < 3) throw Error("quadrature needs at least 3 points");
  double s = 0.0;
  if (n == 2) {
    for (int m = 0; m < points; ++m) {
      double t = 2.0 * std::numbers::pi * m / points;
      s += tau_of_symbol_power(h_inv, {std::cos(t), std::sin(t)}, box, opts);
    }
    return s * 2.0 * std::numbers::pi / points;
  }
  if (n == 3) {
    auto [x, w] = gauss_legendre(std::max(2, points / 2));
    for (Eigen::Index a = 0; a < x.size(); ++a) {
      double sin_polar = std::sqrt(std::max(0.0, 1.0 - x(a) * x(a)));
      for (int m = 0; m < points; ++m) {
        double t = 2.0 * std::numbers::pi * m / points;
        s += w(a) * tau_of_symbol_power(h_inv, {sin_polar * std::cos(t), sin_polar * std::sin(t), x(a)}, box, opts);
      }
    }
    return s * 2.0 * std::numbers::pi / points;
  }
  throw Error("sphere quadrature is implemented for n = 2 and n = 3");
}

}  // namespace

double unit_ball_volume(int n) { return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

WeylConstant weyl_constant(const TorusMatrix& h, const LatticeBox& box, int quadrature_points,
                           const CalculusOptions& opts) {
  TorusMatrix h_inv = inverse(h.resized(std::min(h.radius(), box.radius())), box, opts);
  WeylConstant c;
  const int n = h.geometry().dim();
  c.points = quadrature_points;
  c.quadrature = sphere_average(h_inv, box, quadrature_points, opts) / n;
  return c;
}

WeylConstant weyl_constant(const RiemannianMetric& g, int quadrature_points, int radius) {
  const int n = g.geometry().dim();
  const LatticeBox box(n, radius > 0 ? std::min(radius, g.box().radius()) : g.box().radius());
  WeylConstant c;
  c.points = quadrature_points;
  c.quadrature = sphere_average(g.inverse(), box, quadrature_points, g.options().calculus) / n;
  if (is_self_compatible(g.matrix(), 1e-10)) {
    c.closed_form = std::pow(2.0 * std::numbers::pi, -n) * unit_ball_volume(n) * volume(g);
  }
  return c;
}

WeylFit weyl_fit(const SpectrumResult& spec, double c_n, int n, std::size_t first, std::size_t last) {
  if (first < 1 || last <= first) throw WindowOutOfRange("Weyl window must satisfy 1 <= first < last");
  if (last >= spec.reliable) {
    throw WindowOutOfRange("Weyl window ends at " + std::to_string(last) + " but only " +
                           std::to_string(spec.reliable) + " eigenvalues are stable");
  }
  WeylFit f;
  f.first = first;
  f.last = last;
  f.target_exponent = 2.0 / n;
  f.target_prefactor = std::pow(1.0 / c_n, 2.0 / n);
  const Eigen::VectorXd& ev = spec.eigenvalues;

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double count = static_cast<double>(last - first + 1);
  f.ratio_min = std::numeric_limits<double>::infinity();
  f.ratio_max = -std::numeric_limits<double>::infinity();
  double ratio_sum = 0.0;
  std::size_t below = 0;
  for (std::size_t l = first; l <= last; ++l) {
    double lam = ev(static_cast<Eigen::Index>(l));
    if (lam <= 0.0) throw WindowOutOfRange("Weyl window contains a nonpositive eigenvalue");
    double x = std::log(static_cast<double>(l));
    double y = std::log(lam);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    double cut = lam * (1.0 + 1e-9) + 1e-12;
    while (below < static_cast<std::size_t>(ev.size()) && ev(static_cast<Eigen::Index>(below)) <= cut) ++below;
    double ratio = static_cast<double>(below) / (c_n * std::pow(lam, 0.5 * n));
    f.ratio_min = std::min(f.ratio_min, ratio);
    f.ratio_max = std::max(f.ratio_max, ratio);
    ratio_sum += ratio;
  }
  f.exponent = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  f.prefactor = std::exp((sy - f.exponent * sx) / count);
  f.ratio_mean = ratio_sum / count;
  return f;
}

}  // namespace nct
