#pragma once

#include <string>
#include <vector>

#include "nctorus/calculus.hpp"

namespace nct {

/// det(h) = exp(Tr(log h)) on the box.  Throws SpectralFloorViolation for non-positive h.
AlgebraElement determinant(const TorusMatrix& h, const LatticeBox& box, const CalculusOptions& opts = {});

/// sum over permutations s of sign(s) h_{1 s(1)} ... h_{m s(m)}, exact products.
AlgebraElement leibniz_determinant(const TorusMatrix& h);

struct IdentityResidual {
  std::string identity;
  double residual = 0.0;
};

struct DeterminantReport {
  std::vector<IdentityResidual> residuals;
  double max_residual() const;
};

struct DeterminantCheckOptions {
  CalculusOptions calculus;
  /// Compatibility predicates are accepted below this commutator size.
  double compatibility_tol = 1e-10;
  /// Residuals are compared on modes of radius at most this (negative: whole box).
  int compare_radius = -1;
};

/// Residuals of
///   [det h, det h'] = 0, det(diag(h, h')) = det h det h', det(h h') = det h det h',
///   det(u^* h u) = det(u^* u) det h.
/// Throws HypothesisViolated naming the first compatibility predicate that fails.
DeterminantReport determinant_identities_check(const TorusMatrix& h, const TorusMatrix& h_prime,
                                               const TorusMatrix& u, const LatticeBox& box,
                                               const DeterminantCheckOptions& opts = {});

}  // namespace nct
