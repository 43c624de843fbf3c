#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nctorus/determinant.hpp"

namespace nct {

struct MetricValidationOptions {
  CalculusOptions calculus;
  double selfadjoint_tol = 1e-10;  // entries of g, and of g^{-1} on interior modes
  double inverse_tol = 1e-9;       // g g^{-1} = 1 on interior modes
};

struct MetricValidation {
  double entry_selfadjoint_residual = 0.0;
  double inverse_entry_selfadjoint_residual = 0.0;
  double inverse_residual = 0.0;
  bool positive = false;  // compressed g is above the spectral floor
  /// Commutator size between diagonal blocks (product metrics only).
  double block_compatibility_residual = 0.0;
  bool valid = false;
  std::string failure;  // empty when valid
};

/// Positive invertible matrix with selfadjoint entries whose inverse also has selfadjoint
/// entries.  Construction always runs validation; residuals are kept for reporting.
class RiemannianMetric {
 public:
  /// Runs every validation test without throwing on a failed one.
  static MetricValidation inspect(const TorusMatrix& g, const LatticeBox& box,
                                  const MetricValidationOptions& opts = {});
  /// Throws InvalidMetric with the failing test in the message.
  static RiemannianMetric validate(const TorusMatrix& g, const LatticeBox& box,
                                   const MetricValidationOptions& opts = {});

  const TorusMatrix& matrix() const noexcept { return g_; }
  const TorusMatrix& inverse() const noexcept { return g_inv_; }
  const MetricValidation& report() const noexcept { return report_; }
  const LatticeBox& box() const noexcept { return box_; }
  const MetricValidationOptions& options() const noexcept { return opts_; }
  const TorusGeometry& geometry() const noexcept { return g_.geometry(); }
  std::size_t size() const noexcept { return g_.size(); }

 private:
  friend RiemannianMetric metric_product(const std::vector<RiemannianMetric>& blocks,
                                         const MetricValidationOptions& opts);
  RiemannianMetric(TorusMatrix g, TorusMatrix g_inv, MetricValidation report, LatticeBox box,
                   MetricValidationOptions opts)
      : g_(std::move(g)), g_inv_(std::move(g_inv)), report_(std::move(report)), box_(box), opts_(opts) {}
  static std::pair<MetricValidation, std::optional<TorusMatrix>> run(const TorusMatrix& g, const LatticeBox& box,
                                                                     const MetricValidationOptions& opts);

  TorusMatrix g_;
  TorusMatrix g_inv_;
  MetricValidation report_;
  LatticeBox box_;
  MetricValidationOptions opts_;
};

enum class DensityOrigin { explicit_density, riemannian };

/// Positive invertible element used as a density.
class Density {
 public:
  /// Checks selfadjointness and the spectral floor; throws PositivityViolation.
  static Density from_element(const AlgebraElement& nu, const LatticeBox& box, const CalculusOptions& opts = {});
  static Density unit(const TorusGeometry& g) { return Density(AlgebraElement::identity(g), DensityOrigin::explicit_density); }

  const AlgebraElement& element() const noexcept { return nu_; }
  DensityOrigin origin() const noexcept { return origin_; }

 private:
  friend Density riemannian_density(const RiemannianMetric& g);
  Density(AlgebraElement nu, DensityOrigin origin) : nu_(std::move(nu)), origin_(origin) {}
  AlgebraElement nu_;
  DensityOrigin origin_;
};

RiemannianMetric metric_flat(const TorusGeometry& g, const LatticeBox& box, const MetricValidationOptions& opts = {});
/// Entries k g_ij k.  Throws PositivityViolation unless k is selfadjoint with compressed spectrum above the floor.
RiemannianMetric metric_conformal(const RiemannianMetric& base, const AlgebraElement& k,
                                  const MetricValidationOptions& opts = {});
/// Block-diagonal assembly; block compatibility is measured and stored in the report.
RiemannianMetric metric_product(const std::vector<RiemannianMetric>& blocks, const MetricValidationOptions& opts = {});

/// Matrix-valued function of one real variable, with the interval on which it is positive definite.
struct MatrixFunction {
  std::function<Eigen::MatrixXd(double)> value;
  double domain_min = -std::numeric_limits<double>::infinity();
  double domain_max = std::numeric_limits<double>::infinity();
  std::size_t size = 2;
};

/// Entries g_ij(h) by functional calculus of a selfadjoint h.  Throws SpectrumOutsideDomain if
/// the compressed spectrum of h leaves the domain of g_of_t.
RiemannianMetric metric_functional(const AlgebraElement& h, const MatrixFunction& g_of_t, const LatticeBox& box,
                                   const MetricValidationOptions& opts = {});

/// nu(g) = exp(Tr(log g) / 2).
Density riemannian_density(const RiemannianMetric& g);

/// phi_nu(u) = (2 pi)^n tau(u nu).
Complex weight(const Density& nu, const AlgebraElement& u);
/// Vol_g = (2 pi)^n tau(nu(g)).
double volume(const RiemannianMetric& g);
double volume(const Density& nu);

struct OrthogonalInvarianceReport {
  double orthogonality_residual = 0.0;        // u^t u - 1 and u u^t - 1
  double density_product_residual = 0.0;      // nu(u^t g u) - nu(u^t u) nu(g)
  double density_residual = 0.0;              // nu(u^t g u) - nu(g)
  double volume_residual = 0.0;               // |Vol_{u^t g u} - Vol_g|
  bool orthogonal = false;
};

/// u must have selfadjoint entries, be self-compatible and compatible with g (HypothesisViolated otherwise).
OrthogonalInvarianceReport orthogonal_invariance_check(const RiemannianMetric& g, const TorusMatrix& u,
                                                       double tol = 1e-10);

}  // namespace nct
