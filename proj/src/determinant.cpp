#include "nctorus/determinant.hpp"

#include <algorithm>
#include <numeric>

#include "nctorus/error.hpp"

namespace nct {

AlgebraElement determinant(const TorusMatrix& h, const LatticeBox& box, const CalculusOptions& opts) {
  TorusMatrix log_h = functional_calculus(h, ScalarFunction::log(), box, opts);
  AlgebraElement tr = matrix_trace(log_h);
  // Tr(log h) is selfadjoint in exact arithmetic; remove rounding asymmetry before exponentiating.
  tr = 0.5 * (tr + adjoint(tr));
  return functional_calculus(tr, ScalarFunction::exp(), box, opts);
}

AlgebraElement leibniz_determinant(const TorusMatrix& h) {
  const std::size_t m = h.size();
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<AlgebraElement> trimmed;
  for (const auto& e : h.entries()) trimmed.push_back(e.resized(e.support_radius()));
  AlgebraElement total(h.geometry(), 0);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) inversions += perm[i] > perm[j] ? 1 : 0;
    }
    AlgebraElement term = trimmed[perm[0]];
    for (std::size_t i = 1; i < m; ++i) term = multiply(term, trimmed[i * m + perm[i]]);
    if (inversions % 2 == 1) term *= -1.0;
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

double DeterminantReport::max_residual() const {
  double r = 0.0;
  for (const auto& x : residuals) r = std::max(r, x.residual);
  return r;
}

namespace {

TorusMatrix trimmed(const TorusMatrix& a) { return a.resized(a.support_radius()); }

void require(bool ok, const std::string& predicate, double residual) {
  if (!ok) throw HypothesisViolated(predicate, residual);
}

}  // namespace

DeterminantReport determinant_identities_check(const TorusMatrix& h, const TorusMatrix& h_prime,
                                               const TorusMatrix& u, const LatticeBox& box,
                                               const DeterminantCheckOptions& opts) {
  const double tol = opts.compatibility_tol;
  const int R = box.radius();
  const int cmp = opts.compare_radius < 0 ? R : opts.compare_radius;
  if (h.size() != h_prime.size() || h.size() != u.size()) throw Error("determinant check needs equal sizes");

  double c_hh = compatibility_residual(h, h_prime);
  require(c_hh <= tol, "h and h' compatible", c_hh);
  double c_hu = compatibility_residual(h, u);
  require(c_hu <= tol, "h and u compatible", c_hu);
  double s_h = self_compatibility_residual(h);
  require(s_h <= tol, "h self-compatible", s_h);
  double s_u = self_compatibility_residual(u);
  require(s_u <= tol, "u self-compatible", s_u);
  TorusMatrix u_star = adjoint(u);
  double c_uu = compatibility_residual(u, u_star);
  require(c_uu <= tol, "u and u* compatible", c_uu);
  double comm = commutation_residual(h, h_prime);
  require(comm <= tol, "h and h' commute", comm);

  DeterminantReport report;
  AlgebraElement dh = determinant(h, box, opts.calculus);
  AlgebraElement dhp = determinant(h_prime, box, opts.calculus);
  AlgebraElement prod = multiply_to_radius(dh, dhp, R);

  report.residuals.push_back({"[det h, det h'] = 0", max_abs_diff_within(prod, multiply_to_radius(dhp, dh, R), cmp)});

  AlgebraElement d_block = determinant(TorusMatrix::block_diagonal({h, h_prime}), box, opts.calculus);
  report.residuals.push_back({"det diag(h, h') = det h det h'", max_abs_diff_within(d_block, prod, cmp)});

  TorusMatrix hh = multiply(trimmed(h), trimmed(h_prime));
  AlgebraElement d_prod = determinant(hh.resized(std::min(hh.radius(), R)), box, opts.calculus);
  report.residuals.push_back({"det(h h') = det h det h'", max_abs_diff_within(d_prod, prod, cmp)});

  TorusMatrix uhu = multiply(multiply(trimmed(u_star), trimmed(h)), trimmed(u));
  TorusMatrix uu = multiply(trimmed(u_star), trimmed(u));
  AlgebraElement lhs = determinant(uhu.resized(std::min(uhu.radius(), R)), box, opts.calculus);
  AlgebraElement rhs =
      multiply_to_radius(determinant(uu.resized(std::min(uu.radius(), R)), box, opts.calculus), dh, R);
  report.residuals.push_back({"det(u* h u) = det(u* u) det h", max_abs_diff_within(lhs, rhs, cmp)});
  return report;
}

}  // namespace nct
