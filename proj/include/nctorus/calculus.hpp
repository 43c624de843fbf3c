#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "nctorus/compression.hpp"

namespace nct {

struct CalculusOptions {
  /// Functions singular at 0 refuse compressions whose least eigenvalue is below this.
  double spectral_floor = 1e-8;
  /// Allowed selfadjointness residual, relative to max(1, largest coefficient).
  double selfadjoint_tol = 1e-10;
};

enum class FunctionKind { sqrt, inv_sqrt, log, exp, pow, inv };

struct ScalarFunction {
  FunctionKind kind = FunctionKind::exp;
  double exponent = 1.0;  // used by pow

  static ScalarFunction sqrt() { return {FunctionKind::sqrt}; }
  static ScalarFunction inv_sqrt() { return {FunctionKind::inv_sqrt}; }
  static ScalarFunction log() { return {FunctionKind::log}; }
  static ScalarFunction exp() { return {FunctionKind::exp}; }
  static ScalarFunction inv() { return {FunctionKind::inv}; }
  static ScalarFunction pow(double s) { return {FunctionKind::pow, s}; }
  /// Accepts "sqrt", "inv_sqrt", "log", "exp", "inv", "pow(s)".
  static ScalarFunction parse(std::string_view name);

  double operator()(double t) const;
  /// True when the function needs the spectral floor (all but exp and nonnegative integer powers).
  bool needs_floor() const noexcept;
  std::string name() const;
};

/// Eigendecomposition of the Hermitian compression of a selfadjoint element or matrix on the
/// modes reachable from the cyclic vector(s).  Functions of x are read off columnwise.
class SpectralDecomposition {
 public:
  SpectralDecomposition(const TorusMatrix& x, const LatticeBox& box, const CalculusOptions& opts = {});
  SpectralDecomposition(const AlgebraElement& x, const LatticeBox& box, const CalculusOptions& opts = {})
      : SpectralDecomposition(TorusMatrix::from_element(x), box, opts) {}

  double min_eigenvalue() const { return values_(0); }
  double max_eigenvalue() const { return values_(values_.size() - 1); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return values_; }
  const std::vector<std::size_t>& modes() const noexcept { return modes_; }

  /// f(x) for a named function, enforcing the spectral floor.
  TorusMatrix apply(const ScalarFunction& f) const;
  /// f(x) for an arbitrary function of the eigenvalues (no floor check).
  TorusMatrix apply(const std::function<Complex(double)>& f) const;
  /// Same, with the function values given per eigenvalue (ascending order).
  TorusMatrix apply_values(const Eigen::VectorXcd& f_values) const;

 private:
  TorusGeometry geometry_;
  LatticeBox box_;
  std::size_t blocks_;
  std::vector<std::size_t> modes_;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
  CalculusOptions opts_;
};

/// Throws NonSelfadjointInput if x is not selfadjoint within the configured tolerance.
void require_selfadjoint(const TorusMatrix& x, const CalculusOptions& opts);

AlgebraElement functional_calculus(const AlgebraElement& x, const ScalarFunction& f, const LatticeBox& box,
                                   const CalculusOptions& opts = {});
TorusMatrix functional_calculus(const TorusMatrix& x, const ScalarFunction& f, const LatticeBox& box,
                                const CalculusOptions& opts = {});

/// x^{-1} from a Hermitian positive-definite solve of the compression (spectral floor enforced).
TorusMatrix inverse(const TorusMatrix& x, const LatticeBox& box, const CalculusOptions& opts = {});
AlgebraElement inverse(const AlgebraElement& x, const LatticeBox& box, const CalculusOptions& opts = {});

/// Extreme eigenvalues of the full compression on the box.
std::pair<double, double> spectral_bounds(const AlgebraElement& x, const LatticeBox& box,
                                          const CalculusOptions& opts = {});
std::pair<double, double> spectral_bounds(const TorusMatrix& x, const LatticeBox& box,
                                          const CalculusOptions& opts = {});

/// Witness for x = y^* y + c.
struct PositivityCertificate {
  TorusMatrix witness;
  double constant = 0.0;

  TorusMatrix reconstruct() const;
  /// Largest coefficient of x - (y^* y + c).
  double residual(const TorusMatrix& x) const;
};

struct PositiveMatrix {
  TorusMatrix value;
  PositivityCertificate certificate;
};

struct PositiveElement {
  AlgebraElement value;
  PositivityCertificate certificate;
};

/// x = y^* y + c with exact products.  Throws PositivityViolation unless c > 0.
PositiveMatrix make_positive(const TorusMatrix& y, double c);
PositiveElement make_positive(const AlgebraElement& y, double c);

}  // namespace nct
