#pragma once

#include <optional>

#include "nctorus/laplacian.hpp"

namespace nct {

struct WeylConstant {
  /// (1/n) int_{S^{n-1}} tau[(xi, xi)_{h^{-1}}^{-n/2}] by quadrature.
  double quadrature = 0.0;
  /// (2 pi)^{-n} |B^n| Vol_g, only for self-compatible h.
  std::optional<double> closed_form;
  int points = 0;
};

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

/// Trapezoid rule on the circle (n = 2); Gauss-Legendre in cos(polar) times trapezoid in azimuth
/// (n = 3).  `quadrature_points` is the azimuthal count; functional calculus runs on `box`.
WeylConstant weyl_constant(const TorusMatrix& h, const LatticeBox& box, int quadrature_points = 32,
                           const CalculusOptions& opts = {});
/// Uses g^{-1} on the metric box (or a smaller radius if given); closed form from Vol_g when g is
/// self-compatible.
WeylConstant weyl_constant(const RiemannianMetric& g, int quadrature_points = 32, int radius = 0);

struct WeylFit {
  std::size_t first = 0;  // 1-based eigenvalue index l (lambda_0 = 0 is excluded)
  std::size_t last = 0;
  double exponent = 0.0;         // slope of log lambda_l against log l
  double target_exponent = 0.0;  // 2 / n
  double prefactor = 0.0;        // exp(intercept)
  double target_prefactor = 0.0; // (1 / c_n)^{2/n}
  double ratio_min = 0.0;        // N(lambda_l) / (c_n lambda_l^{n/2}) over the window
  double ratio_max = 0.0;
  double ratio_mean = 0.0;
};

/// Least-squares fit over l in [first, last].  Throws WindowOutOfRange unless the window lies
/// within the reliable eigenvalues.
WeylFit weyl_fit(const SpectrumResult& spec, double c_n, int n, std::size_t first, std::size_t last);

}  // namespace nct
