#include "nctorus/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nctorus/eigensolver.hpp"
#include "nctorus/error.hpp"

namespace nct {

namespace {

AlgebraElement trim(const AlgebraElement& x) { return x.resized(x.support_radius()); }

/// Drops outer shells whose coefficients are below 1e-17 of the largest one.
AlgebraElement trim_negligible(const AlgebraElement& x) { return x.resized(x.support_radius(1e-17 * max_abs(x))); }

AlgebraElement symmetrised(const AlgebraElement& x) { return 0.5 * (x + adjoint(x)); }

TorusMatrix symmetrised(const TorusMatrix& x) { return 0.5 * (x + adjoint(x)); }

Eigen::MatrixXcd hermitian_part(const Eigen::MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

Eigen::VectorXcd to_vector(const AlgebraElement& u, const LatticeBox& box) {
  if (u.support_radius() > box.radius()) throw Error("element is not supported in the operator box");
  AlgebraElement ub = u.resized(box.radius());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(box.size()));
  for (std::size_t i = 0; i < box.size(); ++i) v(static_cast<Eigen::Index>(i)) = ub[i];
  return v;
}

AlgebraElement from_vector(const TorusGeometry& g, const LatticeBox& box, const Eigen::VectorXcd& v) {
  AlgebraElement u(g, box.radius());
  for (std::size_t i = 0; i < box.size(); ++i) u[i] = v(static_cast<Eigen::Index>(i));
  return u;
}

Eigen::MatrixXcd compression(const AlgebraElement& x, const LatticeBox& box) {
  return compress_left_multiplication(x, box).matrix;
}

// Solves a x = rhs for the Hermitian positive compression a.
Eigen::MatrixXcd positive_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rhs, const char* what) {
  auto x = hermitian_positive_solve(hermitian_part(a), rhs);
  if (!x) throw PositivityViolation(std::string(what) + " compression is not positive definite");
  return *x;
}

int automatic_calculus_radius(const LatticeBox& box, int m) { return std::max(box.radius() + 2 * m, 4 * m); }


void check_radii(const LatticeBox& box, int n, int m) {
  if (box.dim() != n) throw GeometryMismatch("box dimension differs from the torus dimension");
  if (m < 0) throw Error("multiplier radius must be nonnegative");
  if (4 * m > box.radius()) {
    throw BoxTooSmall("multiplier radius " + std::to_string(m) + " exceeds a quarter of the box radius " +
                      std::to_string(box.radius()));
  }
}

}  // namespace

LaplaceBeltramiOperator LaplaceBeltramiOperator::build(const TorusMatrix& h_inv_in, const Density& nu,
                                                       const DensityRoots& roots, const LatticeBox& box,
                                                       const AssemblyOptions& opts, int calc_radius) {
  const TorusGeometry& g = h_inv_in.geometry();
  const int n = g.dim();
  if (h_inv_in.size() != static_cast<std::size_t>(n)) throw GeometryMismatch("metric must be n x n");
  const int M = opts.multiplier_radius;
  check_radii(box, n, M);
  const int Rc = calc_radius;
  const LatticeBox calc(n, Rc);
  const CalculusOptions& copts = opts.calculus;

  // Full-precision multipliers, then truncation to radius M.
  TorusMatrix h_inv = symmetrised(h_inv_in.resized(std::min(h_inv_in.radius(), Rc)));
  AlgebraElement s_full = trim(roots.sqrt_nu);
  TorusMatrix a(g, static_cast<std::size_t>(n), M);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AlgebraElement e = multiply(s_full, trim(h_inv(static_cast<std::size_t>(i), static_cast<std::size_t>(j))));
      a.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), multiply_to_radius(e, s_full, M));
    }
  }
  a = symmetrised(a);
  AlgebraElement rho = symmetrised(roots.nu_inv.resized(M));

  // Effective density nu_eff = rho^{-1} and its square roots.
  SpectralDecomposition dec(rho, calc, copts);
  AlgebraElement s = symmetrised(dec.apply(ScalarFunction::inv_sqrt())(0, 0));
  AlgebraElement sqrt_rho = symmetrised(dec.apply(ScalarFunction::sqrt())(0, 0));
  AlgebraElement nu_eff = symmetrised(inverse(rho, calc, copts));
  TorusMatrix h_eff(g, static_cast<std::size_t>(n), Rc);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      AlgebraElement e = multiply(trim(sqrt_rho), a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
      h_eff.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), multiply_to_radius(e, trim(sqrt_rho), Rc));
    }
  }
  FormMetric effective{symmetrised(h_eff), DensityRoots{nu_eff, rho, s, sqrt_rho}, a};

  LaplaceBeltramiOperator op(g, box, opts, nu, h_inv, std::move(effective));
  op.calc_radius_ = Rc;
  op.assemble_matrices();
  return op;
}

void LaplaceBeltramiOperator::assemble_matrices() {
  const int n = geometry_.dim();
  const std::size_t d = box_.size();
  const auto D = static_cast<Eigen::Index>(d);
  CompressedOperator ca = compress_left_multiplication(effective_.weighted, box_);
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(D, D);
  Eigen::MatrixXd kk(D, n);
  for (std::size_t r = 0; r < d; ++r) {
    const int* mode = box_.mode_ptr(r);
    for (int i = 0; i < n; ++i) kk(static_cast<Eigen::Index>(r), i) = mode[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto block = ca.matrix.block(static_cast<Eigen::Index>(i) * D, static_cast<Eigen::Index>(j) * D, D, D);
      k.noalias() += kk.col(i).asDiagonal() * block * kk.col(j).asDiagonal();
    }
  }
  stiffness_ = hermitian_part(k);
  matrix_ = compression(effective_.density.nu_inv, box_) * stiffness_;

  Eigen::MatrixXcd c_s = compression(effective_.density.sqrt_nu, box_);
  Eigen::MatrixXcd x = c_s * matrix_;
  conjugated_ = positive_solve(c_s, x.adjoint(), "nu_eff^{1/2}").adjoint();
  double norm = conjugated_.norm();
  asymmetry_ = norm > 0.0 ? (conjugated_ - conjugated_.adjoint()).norm() / norm : 0.0;
}

LaplaceBeltramiOperator assemble_from_dual(const TorusMatrix& h_inv, const Density& nu, const LatticeBox& box,
                                           const AssemblyOptions& opts) {
  check_radii(box, h_inv.geometry().dim(), opts.multiplier_radius);
  const int Rc = opts.calculus_radius > 0 ? opts.calculus_radius : automatic_calculus_radius(box, opts.multiplier_radius);
  DensityRoots roots = DensityRoots::compute(nu, LatticeBox(box.dim(), Rc), opts.calculus);
  return LaplaceBeltramiOperator::build(h_inv, nu, roots, box, opts, Rc);
}

LaplaceBeltramiOperator assemble(const TorusMatrix& h, const Density& nu, const LatticeBox& box,
                                 const AssemblyOptions& opts) {
  check_radii(box, h.geometry().dim(), opts.multiplier_radius);
  const int Rc = opts.calculus_radius > 0 ? opts.calculus_radius
                                          : automatic_calculus_radius(box, opts.multiplier_radius);
  const LatticeBox calc(box.dim(), Rc);
  TorusMatrix h_inv = inverse(h.resized(std::min(h.radius(), Rc)), calc, opts.calculus);
  AssemblyOptions o = opts;
  o.calculus_radius = Rc;
  return assemble_from_dual(h_inv, nu, box, o);
}

LaplaceBeltramiOperator assemble_riemannian(const RiemannianMetric& g, const LatticeBox& box,
                                            const AssemblyOptions& opts) {
  check_radii(box, g.geometry().dim(), opts.multiplier_radius);
  const int Rc = opts.calculus_radius > 0 ? opts.calculus_radius : automatic_calculus_radius(box, opts.multiplier_radius);
  Density nu = riemannian_density(g);
  DensityRoots roots = DensityRoots::compute(nu, LatticeBox(box.dim(), Rc), opts.calculus);
  LaplaceBeltramiOperator op = LaplaceBeltramiOperator::build(g.inverse(), nu, roots, box, opts, Rc);
  if (is_self_compatible(g.matrix(), 1e-10)) {
    // nu(g) commutes with g^{ij}, so nu^{1/2} g^{ij} nu^{1/2} = nu g^{ij}.
    const int r_cmp = std::min(Rc, g.box().radius());
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        AlgebraElement gij = trim(g.inverse()(i, j));
        AlgebraElement sandwiched = multiply_to_radius(multiply(trim(roots.sqrt_nu), gij), trim(roots.sqrt_nu), r_cmp);
        AlgebraElement commuted = multiply_to_radius(trim(roots.nu), gij, r_cmp);
        r = std::max(r, max_abs_diff_within(sandwiched, commuted, r_cmp / 2));
      }
    }
    op.commuted_form_residual = r;
  }
  return op;
}

AlgebraElement LaplaceBeltramiOperator::apply(const AlgebraElement& u) const {
  require_same_geometry(u, AlgebraElement::zero(geometry_));
  return from_vector(geometry_, box_, matrix_ * to_vector(u, box_));
}

LaplaceBeltramiOperator LaplaceBeltramiOperator::reassembled(int radius) const {
  LatticeBox box(box_.dim(), radius);
  check_radii(box, geometry_.dim(), opts_.multiplier_radius);
  LaplaceBeltramiOperator op = *this;
  op.box_ = box;
  op.assemble_matrices();
  return op;
}

double green_identity_residual(const LaplaceBeltramiOperator& op, const std::vector<AlgebraElement>& u,
                               const std::vector<AlgebraElement>& v) {
  const FormMetric& fm = op.effective_metric();
  AlgebraElement nu = trim(fm.density.nu);
  double r = 0.0;
  for (const auto& ui : u) {
    AlgebraElement lu = trim(op.apply(ui));
    OneForm du = differential(trim(ui));
    for (const auto& vj : v) {
      Complex lhs = trace_of_product(adjoint(trim(vj)), multiply(nu, lu));
      Complex rhs = form_inner_product(du, differential(trim(vj)), fm);
      r = std::max(r, std::abs(lhs - rhs));
    }
  }
  return r;
}

namespace {

std::vector<std::vector<double>> sphere_directions(int n, int samples) {
  std::vector<std::vector<double>> out;
  if (n == 2) {
    for (int m = 0; m < samples; ++m) {
      double t = 2.0 * std::numbers::pi * m / samples;
      out.push_back({std::cos(t), std::sin(t)});
    }
    return out;
  }
  // Cartesian grid on [-1, 1]^n projected to the sphere.
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  const int side = std::max(2, samples / 2);
  while (true) {
    std::vector<double> x(static_cast<std::size_t>(n));
    double norm = 0.0;
    for (int i = 0; i < n; ++i) {
      x[static_cast<std::size_t>(i)] = -1.0 + 2.0 * (idx[static_cast<std::size_t>(i)] + 0.5) / side;
      norm += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    }
    norm = std::sqrt(norm);
    for (double& c : x) c /= norm;
    out.push_back(std::move(x));
    int a = 0;
    while (a < n && ++idx[static_cast<std::size_t>(a)] == side) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  return out;
}

}  // namespace

PrincipalSymbolReport principal_symbol_check(const LaplaceBeltramiOperator& op, int samples_per_angle) {
  const int n = op.geometry().dim();
  const TorusMatrix& hi = op.dual_metric();
  const LatticeBox probe(n, std::max(2, 2 * op.multiplier_radius()));
  PrincipalSymbolReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_eigenvalue = -std::numeric_limits<double>::infinity();
  for (const auto& xi : sphere_directions(n, samples_per_angle)) {
    AlgebraElement q = AlgebraElement::zero(op.geometry());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        q += (xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)]) *
             hi(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      }
    }
    auto [lo, hi_ev] = spectral_bounds(symmetrised(q), probe, op.options().calculus);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, hi_ev);
    ++rep.directions;
  }
  rep.invertible = rep.min_eigenvalue > op.options().calculus.spectral_floor;
  return rep;
}

std::vector<int> multiplicity_groups(const Eigen::VectorXd& values, double tol) {
  std::vector<int> g(static_cast<std::size_t>(values.size()), 0);
  int id = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values(i) - values(i - 1) > tol * (1.0 + std::abs(values(i)))) ++id;
    g[static_cast<std::size_t>(i)] = id;
  }
  return g;
}

std::size_t SpectrumResult::kernel_dimension(double tol) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < reliable; ++i) {
    if (std::abs(eigenvalues(static_cast<Eigen::Index>(i))) <= tol) ++c;
  }
  return c;
}

double SpectrumResult::shell_decay_below(double lambda_max) const {
  double r = 0.0;
  for (std::size_t i = 0; i < shell_decay.size(); ++i) {
    if (eigenvalues(static_cast<Eigen::Index>(i)) <= lambda_max) r = std::max(r, shell_decay[i]);
  }
  return r;
}

double SpectrumResult::min_reliable() const {
  if (reliable == 0) return std::numeric_limits<double>::quiet_NaN();
  return eigenvalues(0);
}

SpectrumResult spectrum(const LaplaceBeltramiOperator& op, const SpectrumOptions& opts) {
  SpectrumResult res;
  res.asymmetry = op.asymmetry();
  HermitianEigen eig = hermitian_eigensolve(hermitian_part(op.conjugated()), opts.want_vectors);
  res.eigenvalues = eig.values;

  const int r2 = opts.stability_radius > 0 ? opts.stability_radius : op.box().radius() + 2;
  if (r2 <= op.box().radius()) throw Error("stability box must be larger than the operator box");
  LaplaceBeltramiOperator big = op.reassembled(r2);
  res.comparison = hermitian_eigensolve(hermitian_part(big.conjugated()), false).values;

  const Eigen::Index m = res.eigenvalues.size();
  res.stable.assign(static_cast<std::size_t>(m), false);
  res.box_radius = op.box().radius();
  bool prefix = true;
  bool tight = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    double a = res.eigenvalues(i);
    double diff = std::abs(a - res.comparison(i));
    bool ok = diff <= opts.stability_rel_tol * std::max(1.0, std::abs(a));
    res.stable[static_cast<std::size_t>(i)] = ok;
    prefix = prefix && ok;
    tight = tight && prefix && diff <= opts.resolved_rel_tol * (1.0 + std::abs(a));
    if (prefix) ++res.reliable;
    if (tight) ++res.resolved;
  }
  res.group = multiplicity_groups(res.eigenvalues, opts.group_tol);

  const auto rel = static_cast<Eigen::Index>(res.reliable);
  if (opts.want_vectors && rel > 0) {
    const LatticeBox& box = op.box();
    Eigen::MatrixXcd c_s = compression(op.effective_metric().density.sqrt_nu, box);
    res.eigenvectors = positive_solve(c_s, eig.vectors.leftCols(rel), "nu_eff^{1/2}");
    Eigen::MatrixXcd c_nu = compression(op.effective_metric().density.nu, box);
    const auto tight = static_cast<Eigen::Index>(res.resolved);
    if (tight > 0) {
      auto e = res.eigenvectors.leftCols(tight);
      Eigen::MatrixXcd gram = e.adjoint() * c_nu * e;
      res.gram_residual = (gram - Eigen::MatrixXcd::Identity(tight, tight)).cwiseAbs().maxCoeff();
    }
    for (Eigen::Index c = 0; c < rel; ++c) {
      double all = 0.0;
      double shell = 0.0;
      for (std::size_t r = 0; r < box.size(); ++r) {
        double v = std::abs(res.eigenvectors(static_cast<Eigen::Index>(r), c));
        all = std::max(all, v);
        if (box.shell(r) == box.radius()) shell = std::max(shell, v);
      }
      res.shell_decay.push_back(all > 0.0 ? shell / all : 0.0);
    }
  }

  if (opts.cross_check && rel > 0) {
    Eigen::MatrixXcd c_nu = hermitian_part(compression(op.effective_metric().density.nu, op.box()));
    Eigen::VectorXd gen = hermitian_generalized_eigensolve(op.stiffness(), c_nu, false).values;
    double r = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(res.resolved); ++i) {
      r = std::max(r, std::abs(res.eigenvalues(i) - gen(i)) / (1.0 + std::abs(res.eigenvalues(i))));
    }
    res.cross_check_residual = r;
  }

  if (opts.strict && res.reliable < opts.count) throw UnstableSpectrum(opts.count, res.reliable);
  return res;
}

ConformalCovarianceReport conformal_covariance_check(const RiemannianMetric& g, const AlgebraElement& k,
                                                     const ConformalCheckOptions& opts) {
  const LatticeBox& box = g.box();
  const TorusGeometry& geo = g.geometry();
  const int n = geo.dim();
  ConformalCovarianceReport rep;
  AlgebraElement kt = trim(k.resized(std::min(k.radius(), box.radius())));
  for (const auto& e : g.matrix().entries()) {
    rep.commutation_residual = std::max(rep.commutation_residual, max_abs(commutator(kt, trim(e))));
  }
  if (rep.commutation_residual > opts.commutation_tol) {
    throw HypothesisViolated("k commutes with the entries of g", rep.commutation_residual);
  }

  RiemannianMetric g_hat = metric_conformal(g, k, g.options());
  FormMetric fm = FormMetric::from_metric(g);
  FormMetric fm_hat = FormMetric::from_metric(g_hat);
  const CalculusOptions& c = g.options().calculus;
  AlgebraElement k_m2 = trim_negligible(symmetrised(functional_calculus(kt, ScalarFunction::pow(-2.0), box, c)));
  AlgebraElement k_mn = trim_negligible(symmetrised(functional_calculus(kt, ScalarFunction::pow(-n), box, c)));
  // k^{n-2} is exactly 1 in dimension two.
  AlgebraElement kappa = n == 2 ? AlgebraElement::identity(geo)
                                : trim_negligible(symmetrised(functional_calculus(kt, ScalarFunction::pow(n - 2.0), box, c)));
  OneForm zeta = left_action(fm.density.sqrt_nu, differential(trim(kappa)));
  AlgebraElement nu_inv_k = trim_negligible(multiply(trim(fm.density.nu_inv), k_mn));
  // <omega, zeta>'_h = sum_j w_j omega_j with w_j = sum_i zeta_i^* h^{ij}, fixed across probes.
  std::vector<AlgebraElement> w;
  for (std::size_t j = 0; j < zeta.size(); ++j) {
    AlgebraElement wj = AlgebraElement::zero(geo);
    for (std::size_t i = 0; i < zeta.size(); ++i) wj += multiply(adjoint(trim(zeta.components[i])), trim(fm.h_inv(i, j)));
    w.push_back(trim_negligible(wj));
  }

  const LatticeBox probes(n, opts.probe_radius);
  for (std::size_t idx = 0; idx < probes.size(); ++idx) {
    auto q = probes.mode(idx);
    AlgebraElement u = AlgebraElement::basis(geo, q);
    AlgebraElement lhs = apply_laplacian(u, fm_hat);
    AlgebraElement scaled = multiply(k_m2, trim(apply_laplacian(u, fm)));
    OneForm omega = left_action(fm.density.sqrt_nu, differential(u));
    AlgebraElement pairing = AlgebraElement::zero(geo);
    for (std::size_t j = 0; j < w.size(); ++j) pairing += multiply(w[j], trim(omega.components[j]));
    AlgebraElement correction = multiply(nu_inv_k, trim(pairing));
    rep.scaling_residual = std::max(rep.scaling_residual, max_abs_diff(lhs, scaled));
    rep.law_residual = std::max(rep.law_residual, max_abs_diff(lhs, scaled - correction));
    ++rep.probes;
  }
  return rep;
}

Eigen::MatrixXcd conformally_deformed_flat(const AlgebraElement& k, const LatticeBox& box,
                                           const CalculusOptions& opts) {
  const int n = box.dim();
  const LatticeBox calc(n, std::max(box.radius(), k.support_radius()));
  AlgebraElement k_inv = symmetrised(inverse(k.resized(std::min(k.radius(), calc.radius())), calc, opts));
  Eigen::MatrixXcd c = compression(k_inv, box);
  Eigen::VectorXd lap(static_cast<Eigen::Index>(box.size()));
  for (std::size_t r = 0; r < box.size(); ++r) {
    const int* mode = box.mode_ptr(r);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(mode[i]) * mode[i];
    lap(static_cast<Eigen::Index>(r)) = s;
  }
  return hermitian_part(c * lap.asDiagonal() * c);
}

}  // namespace nct
