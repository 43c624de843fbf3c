#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nctorus/forms.hpp"

namespace nct {

struct AssemblyOptions {
  /// Multipliers nu^{-1}, nu^{1/2} h^{ij} nu^{1/2} are truncated to this radius (must be <= N/4).
  int multiplier_radius = 3;
  /// Box on which nu^{-1}, nu^{1/2}, h^{-1} and the effective density are computed (<= 0: automatic).
  int calculus_radius = 0;
  CalculusOptions calculus;
};

/// Delta_{h,nu} u = -nu^{-1} sum_ij d_i(nu^{1/2} h^{ij} nu^{1/2} d_j u) on span{V_k : k in B_N}.
///
/// With truncated multipliers rho ~ nu^{-1} and A_ij ~ nu^{1/2} h^{ij} nu^{1/2} the assembled matrix is
/// M = C(rho) K,  K = -sum_ij D_i C(A_ij) D_j,
/// which is exactly the Laplacian of the pair whose density is nu_eff = rho^{-1}.  The Hermitian
/// form is T = C(s) M C(s)^{-1} with s = nu_eff^{1/2}.
class LaplaceBeltramiOperator {
 public:
  const TorusGeometry& geometry() const noexcept { return geometry_; }
  const LatticeBox& box() const noexcept { return box_; }
  int multiplier_radius() const noexcept { return opts_.multiplier_radius; }
  int calculus_radius() const noexcept { return calc_radius_; }
  const AssemblyOptions& options() const noexcept { return opts_; }

  /// M(Delta).
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  /// K = -sum D_i C(A_ij) D_j (Hermitian, nonnegative).
  const Eigen::MatrixXcd& stiffness() const noexcept { return stiffness_; }
  /// C(s) M C(s)^{-1}.
  const Eigen::MatrixXcd& conjugated() const noexcept { return conjugated_; }
  /// ||T - T^*||_F / ||T||_F.
  double asymmetry() const noexcept { return asymmetry_; }

  /// Truncated multipliers and effective density, usable with the forms module.
  const FormMetric& effective_metric() const noexcept { return effective_; }
  /// Untruncated inputs on the calculus box.
  const TorusMatrix& dual_metric() const noexcept { return h_inv_; }
  const Density& density() const noexcept { return nu_; }

  /// M(Delta) u for u supported in the box.
  AlgebraElement apply(const AlgebraElement& u) const;
  /// Same operator on another box radius.
  LaplaceBeltramiOperator reassembled(int radius) const;

  /// Set by assemble_riemannian for self-compatible metrics: max |nu^{1/2} g^{ij} nu^{1/2} - nu g^{ij}|.
  std::optional<double> commuted_form_residual;

 private:
  friend LaplaceBeltramiOperator assemble_from_dual(const TorusMatrix& h_inv, const Density& nu,
                                                    const LatticeBox& box, const AssemblyOptions& opts);
  friend LaplaceBeltramiOperator assemble_riemannian(const RiemannianMetric& g, const LatticeBox& box,
                                                     const AssemblyOptions& opts);
  LaplaceBeltramiOperator(TorusGeometry g, LatticeBox box, AssemblyOptions opts, Density nu, TorusMatrix h_inv,
                          FormMetric effective)
      : geometry_(std::move(g)), box_(box), opts_(opts), nu_(std::move(nu)), h_inv_(std::move(h_inv)),
        effective_(std::move(effective)) {}
  static LaplaceBeltramiOperator build(const TorusMatrix& h_inv, const Density& nu, const DensityRoots& roots,
                                       const LatticeBox& box, const AssemblyOptions& opts, int calc_radius);
  /// Fills matrix_, stiffness_, conjugated_ and asymmetry_ from effective_ on box_.
  void assemble_matrices();

  TorusGeometry geometry_;
  LatticeBox box_;
  AssemblyOptions opts_;
  int calc_radius_ = 0;
  Density nu_;
  TorusMatrix h_inv_;
  FormMetric effective_;
  Eigen::MatrixXcd matrix_;
  Eigen::MatrixXcd stiffness_;
  Eigen::MatrixXcd conjugated_;
  double asymmetry_ = 0.0;
};

/// Throws BoxTooSmall if the multiplier radius exceeds N/4.
LaplaceBeltramiOperator assemble(const TorusMatrix& h, const Density& nu, const LatticeBox& box,
                                 const AssemblyOptions& opts = {});
/// Same, from the dual metric h^{ij} directly.
LaplaceBeltramiOperator assemble_from_dual(const TorusMatrix& h_inv, const Density& nu, const LatticeBox& box,
                                           const AssemblyOptions& opts = {});
/// h^{ij} = g^{ij}, nu = nu(g).  Self-compatible g also records the commuted-form residual.
LaplaceBeltramiOperator assemble_riemannian(const RiemannianMetric& g, const LatticeBox& box,
                                            const AssemblyOptions& opts = {});

/// max over u, v of |<Delta u, v>^o_nu - <du, dv>^o_{h,nu}| for the effective pair.
double green_identity_residual(const LaplaceBeltramiOperator& op, const std::vector<AlgebraElement>& u,
                               const std::vector<AlgebraElement>& v);

struct PrincipalSymbolReport {
  std::size_t directions = 0;
  /// Least compressed eigenvalue of sum_ij xi_i xi_j h^{ij} over sampled unit xi.
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool invertible = false;
};

/// Samples the unit sphere (circle for n = 2, product grid otherwise).
PrincipalSymbolReport principal_symbol_check(const LaplaceBeltramiOperator& op, int samples_per_angle = 16);

struct SpectrumOptions {
  std::size_t count = 50;
  /// Comparison box radius; <= 0 means N + 2.
  int stability_radius = 0;
  double stability_rel_tol = 1e-3;
  /// Tighter agreement (relative to 1 + lambda) defining the resolved prefix.
  double resolved_rel_tol = 1e-8;
  double group_tol = 1e-6;
  bool want_vectors = false;
  /// Generalized solve K c = lambda C(nu_eff) c.
  bool cross_check = false;
  /// Throw UnstableSpectrum when fewer than `count` eigenvalues are stable.
  bool strict = true;
};

struct SpectrumResult {
  Eigen::VectorXd eigenvalues;  // ascending, all of (T + T^*) / 2
  Eigen::VectorXd comparison;   // eigenvalues on the stability box
  std::vector<bool> stable;
  /// Length of the longest prefix of stable eigenvalues.
  std::size_t reliable = 0;
  /// Length of the longest prefix agreeing to resolved_rel_tol; Gram and cross-check use these.
  std::size_t resolved = 0;
  int box_radius = 0;
  std::vector<int> group;  // multiplicity group id per eigenvalue
  double asymmetry = 0.0;

  /// Columns e = C(s)^{-1} w for the first `reliable` eigenvalues (coefficients on the box).
  Eigen::MatrixXcd eigenvectors;
  /// max |E^* C(nu_eff) E - I| over the resolved eigenvectors.
  double gram_residual = 0.0;
  /// Per reliable eigenvector: max |coeff| on the outer shell / max |coeff|.
  std::vector<double> shell_decay;

  std::optional<double> cross_check_residual;  // max |lambda - lambda_gen| / (1 + lambda) over resolved
  /// Largest shell_decay among reliable eigenvalues <= lambda_max.
  double shell_decay_below(double lambda_max) const;
  std::size_t kernel_dimension(double tol = 1e-8) const;
  double min_reliable() const;
};

SpectrumResult spectrum(const LaplaceBeltramiOperator& op, const SpectrumOptions& opts = {});

/// Groups sorted values that lie within tol (1 + |lambda|) of their predecessor.
std::vector<int> multiplicity_groups(const Eigen::VectorXd& values, double tol);

struct ConformalCovarianceReport {
  double commutation_residual = 0.0;  // max |[k, g_ij]|
  /// Delta_{k^2 g} u against k^{-2} Delta_g u - nu^{-1} k^{-n} <sqrt(nu) du, sqrt(nu) d(k^{n-2})>_{g^{-1}}.
  double law_residual = 0.0;
  /// Delta_{k^2 g} u against k^{-2} Delta_g u (the correction only vanishes for n = 2).
  double scaling_residual = 0.0;
  std::size_t probes = 0;
};

struct ConformalCheckOptions {
  /// u runs over V_q with max |q_i| <= probe_radius.
  int probe_radius = 3;
  double commutation_tol = 1e-9;
};

/// Applies both sides to basis elements with exact products and the multipliers of g's box.
/// Throws HypothesisViolated when k does not commute with g.
ConformalCovarianceReport conformal_covariance_check(const RiemannianMetric& g, const AlgebraElement& k,
                                                     const ConformalCheckOptions& opts = {});

/// Matrix of k^{-1} Delta_flat k^{-1} on the box (Hermitian, from compressions).
Eigen::MatrixXcd conformally_deformed_flat(const AlgebraElement& k, const LatticeBox& box,
                                           const CalculusOptions& opts = {});

}  // namespace nct
