#include "nctorus/calculus.hpp"

#include <cmath>
#include <sstream>

#include "nctorus/eigensolver.hpp"
#include "nctorus/error.hpp"

namespace nct {

ScalarFunction ScalarFunction::parse(std::string_view name) {
  if (name == "sqrt") return sqrt();
  if (name == "inv_sqrt") return inv_sqrt();
  if (name == "log") return log();
  if (name == "exp") return exp();
  if (name == "inv") return inv();
  if (name.starts_with("pow(") && name.ends_with(")")) {
    std::string arg(name.substr(4, name.size() - 5));
    std::size_t used = 0;
    double s = 0.0;
    try {
      s = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && used > 0) return pow(s);
  }
  throw Error("unknown function name: " + std::string(name));
}

double ScalarFunction::operator()(double t) const {
  switch (kind) {
    case FunctionKind::sqrt:
      return std::sqrt(t);
    case FunctionKind::inv_sqrt:
      return 1.0 / std::sqrt(t);
    case FunctionKind::log:
      return std::log(t);
    case FunctionKind::exp:
      return std::exp(t);
    case FunctionKind::pow:
      return std::pow(t, exponent);
    case FunctionKind::inv:
      return 1.0 / t;
  }
  return 0.0;
}

bool ScalarFunction::needs_floor() const noexcept {
  if (kind == FunctionKind::exp) return false;
  if (kind == FunctionKind::pow) return !(exponent >= 0.0 && std::floor(exponent) == exponent);
  return true;
}

std::string ScalarFunction::name() const {
  switch (kind) {
    case FunctionKind::sqrt:
      return "sqrt";
    case FunctionKind::inv_sqrt:
      return "inv_sqrt";
    case FunctionKind::log:
      return "log";
    case FunctionKind::exp:
      return "exp";
    case FunctionKind::inv:
      return "inv";
    case FunctionKind::pow: {
      std::ostringstream os;
      os << "pow(" << exponent << ")";
      return os.str();
    }
  }
  return "?";
}

void require_selfadjoint(const TorusMatrix& x, const CalculusOptions& opts) {
  double scale = 1.0;
  for (const auto& e : x.entries()) scale = std::max(scale, max_abs(e));
  double r = selfadjoint_residual(x);
  if (r > opts.selfadjoint_tol * scale) {
    std::ostringstream msg;
    msg << "input is not selfadjoint (residual " << r << ")";
    throw NonSelfadjointInput(msg.str());
  }
}

namespace {

Eigen::MatrixXcd symmetrised(const Eigen::MatrixXcd& a) { return 0.5 * (a + a.adjoint()); }

TorusMatrix read_columns(const TorusGeometry& g, const LatticeBox& box, std::size_t m,
                         const std::vector<std::size_t>& modes, const Eigen::MatrixXcd& cols) {
  const std::size_t d = modes.size();
  TorusMatrix out(g, m, box.radius());
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      AlgebraElement e(g, box.radius());
      for (std::size_t a = 0; a < d; ++a) {
        e[modes[a]] = cols(static_cast<Eigen::Index>(i * d + a), static_cast<Eigen::Index>(j));
      }
      out.set(i, j, e);
    }
  }
  return out;
}

std::size_t cyclic_position(const std::vector<std::size_t>& modes, const LatticeBox& box) {
  for (std::size_t a = 0; a < modes.size(); ++a) {
    if (modes[a] == box.center_index()) return a;
  }
  throw Error("cyclic vector missing from the reachable modes");
}

}  // namespace

SpectralDecomposition::SpectralDecomposition(const TorusMatrix& x, const LatticeBox& box,
                                             const CalculusOptions& opts)
    : geometry_(x.geometry()), box_(box), blocks_(x.size()), opts_(opts) {
  require_selfadjoint(x, opts);
  modes_ = reachable_modes(x, box);
  CompressedOperator op = compress_on_modes(x, box, modes_);
  HermitianEigen eig = hermitian_eigensolve(symmetrised(op.matrix), true);
  values_ = std::move(eig.values);
  vectors_ = std::move(eig.vectors);
}

TorusMatrix SpectralDecomposition::apply(const ScalarFunction& f) const {
  if (f.needs_floor() && min_eigenvalue() < opts_.spectral_floor) {
    throw SpectralFloorViolation(min_eigenvalue(), opts_.spectral_floor);
  }
  return apply(std::function<Complex(double)>([&f](double t) { return Complex(f(t), 0.0); }));
}

TorusMatrix SpectralDecomposition::apply(const std::function<Complex(double)>& f) const {
  Eigen::VectorXcd fv(values_.size());
  for (Eigen::Index r = 0; r < values_.size(); ++r) fv(r) = f(values_(r));
  return apply_values(fv);
}

TorusMatrix SpectralDecomposition::apply_values(const Eigen::VectorXcd& f_values) const {
  if (f_values.size() != values_.size()) throw Error("one function value per eigenvalue is required");
  const std::size_t d = modes_.size();
  const std::size_t c0 = cyclic_position(modes_, box_);
  const auto dim = static_cast<Eigen::Index>(blocks_ * d);
  // f(C) E = V f(L) V^* E where E selects the cyclic vectors e_j (x) delta_0.
  Eigen::MatrixXcd w(dim, static_cast<Eigen::Index>(blocks_));
  for (std::size_t j = 0; j < blocks_; ++j) {
    w.col(static_cast<Eigen::Index>(j)) = vectors_.row(static_cast<Eigen::Index>(j * d + c0)).adjoint();
  }
  for (Eigen::Index r = 0; r < dim; ++r) w.row(r) *= f_values(r);
  Eigen::MatrixXcd cols = vectors_ * w;
  return read_columns(geometry_, box_, blocks_, modes_, cols);
}

namespace {

// Groups of indices coupled through nonzero entries; x is block diagonal along these groups
// up to a permutation, and so is every function of x.
std::vector<std::vector<std::size_t>> coupled_groups(const TorusMatrix& x) {
  const std::size_t m = x.size();
  std::vector<std::size_t> label(m);
  for (std::size_t i = 0; i < m; ++i) label[i] = i;
  auto find = [&label](std::size_t i) {
    while (label[i] != i) i = label[i] = label[label[i]];
    return i;
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j && !x(i, j).is_zero()) label[find(i)] = find(j);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t r = find(i);
    if (slot[r] == m) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

template <typename Op>
TorusMatrix blockwise(const TorusMatrix& x, const LatticeBox& box, Op op) {
  auto groups = coupled_groups(x);
  if (groups.size() == 1) return op(x);
  TorusMatrix out(x.geometry(), x.size(), box.radius());
  for (const auto& g : groups) {
    std::vector<AlgebraElement> e;
    for (std::size_t i : g) {
      for (std::size_t j : g) e.push_back(x(i, j));
    }
    TorusMatrix fb = op(TorusMatrix(g.size(), std::move(e)));
    for (std::size_t a = 0; a < g.size(); ++a) {
      for (std::size_t b = 0; b < g.size(); ++b) out.set(g[a], g[b], fb(a, b));
    }
  }
  return out;
}

}  // namespace

TorusMatrix functional_calculus(const TorusMatrix& x, const ScalarFunction& f, const LatticeBox& box,
                                const CalculusOptions& opts) {
  if (f.kind == FunctionKind::inv) return inverse(x, box, opts);
  return blockwise(x, box, [&](const TorusMatrix& b) { return SpectralDecomposition(b, box, opts).apply(f); });
}

AlgebraElement functional_calculus(const AlgebraElement& x, const ScalarFunction& f, const LatticeBox& box,
                                   const CalculusOptions& opts) {
  return functional_calculus(TorusMatrix::from_element(x), f, box, opts)(0, 0);
}

namespace {

TorusMatrix inverse_coupled(const TorusMatrix& x, const LatticeBox& box, const CalculusOptions& opts) {
  std::vector<std::size_t> modes = reachable_modes(x, box);
  CompressedOperator op = compress_on_modes(x, box, modes);
  Eigen::MatrixXcd c = symmetrised(op.matrix);
  if (!positive_definite_above(c, opts.spectral_floor)) {
    HermitianEigen eig = hermitian_eigensolve(c, false);
    throw SpectralFloorViolation(eig.values(0), opts.spectral_floor);
  }
  const std::size_t d = modes.size();
  const std::size_t m = x.size();
  const std::size_t c0 = cyclic_position(modes, box);
  Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(c.rows(), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) rhs(static_cast<Eigen::Index>(j * d + c0), static_cast<Eigen::Index>(j)) = 1.0;
  auto sol = hermitian_positive_solve(c, rhs);
  if (!sol) throw SpectralFloorViolation(0.0, opts.spectral_floor);
  return read_columns(x.geometry(), box, m, modes, *sol);
}

}  // namespace

TorusMatrix inverse(const TorusMatrix& x, const LatticeBox& box, const CalculusOptions& opts) {
  require_selfadjoint(x, opts);
  return blockwise(x, box, [&](const TorusMatrix& b) { return inverse_coupled(b, box, opts); });
}

AlgebraElement inverse(const AlgebraElement& x, const LatticeBox& box, const CalculusOptions& opts) {
  return inverse(TorusMatrix::from_element(x), box, opts)(0, 0);
}

std::pair<double, double> spectral_bounds(const TorusMatrix& x, const LatticeBox& box, const CalculusOptions& opts) {
  require_selfadjoint(x, opts);
  CompressedOperator op = compress_left_multiplication(x, box);
  HermitianEigen eig = hermitian_eigensolve(symmetrised(op.matrix), false);
  return {eig.values(0), eig.values(eig.values.size() - 1)};
}

std::pair<double, double> spectral_bounds(const AlgebraElement& x, const LatticeBox& box,
                                          const CalculusOptions& opts) {
  return spectral_bounds(TorusMatrix::from_element(x), box, opts);
}

namespace {

TorusMatrix plus_scalar(TorusMatrix x, double c) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    AlgebraElement d = x(i, i);
    d += AlgebraElement::scalar(x.geometry(), c);
    x.set(i, i, d);
  }
  return x;
}

}  // namespace

TorusMatrix PositivityCertificate::reconstruct() const {
  return plus_scalar(multiply(adjoint(witness), witness), constant);
}

double PositivityCertificate::residual(const TorusMatrix& x) const { return max_abs_diff(reconstruct(), x); }

PositiveMatrix make_positive(const TorusMatrix& y, double c) {
  if (!(c > 0.0)) throw PositivityViolation("make_positive needs a positive constant");
  PositivityCertificate cert{y, c};
  return {cert.reconstruct(), std::move(cert)};
}

PositiveElement make_positive(const AlgebraElement& y, double c) {
  PositiveMatrix p = make_positive(TorusMatrix::from_element(y), c);
  return {p.value(0, 0), p.certificate};
}

}  // namespace nct
