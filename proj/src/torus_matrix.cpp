#include "nctorus/torus_matrix.hpp"

#include <algorithm>

#include "nctorus/error.hpp"

namespace nct {

TorusMatrix::TorusMatrix(const TorusGeometry& g, std::size_t m, int radius)
    : m_(m), entries_(m * m, AlgebraElement(g, radius)) {
  if (m == 0) throw Error("matrix size must be positive");
}

TorusMatrix::TorusMatrix(std::size_t m, std::vector<AlgebraElement> entries) : m_(m), entries_(std::move(entries)) {
  if (m == 0 || entries_.size() != m * m) throw Error("matrix needs m*m entries");
  for (const auto& e : entries_) require_same_geometry(entries_.front(), e);
  normalise_radius();
}

void TorusMatrix::normalise_radius() {
  int r = 0;
  for (const auto& e : entries_) r = std::max(r, e.radius());
  for (auto& e : entries_) {
    if (e.radius() != r) e = e.resized(r);
  }
}

TorusMatrix TorusMatrix::identity(const TorusGeometry& g, std::size_t m, int radius) {
  TorusMatrix a(g, m, radius);
  for (std::size_t i = 0; i < m; ++i) a.entries_[i * m + i] = AlgebraElement::identity(g, radius);
  return a;
}

TorusMatrix TorusMatrix::diagonal(const std::vector<AlgebraElement>& d) {
  if (d.empty()) throw Error("diagonal needs at least one entry");
  std::size_t m = d.size();
  std::vector<AlgebraElement> e(m * m, AlgebraElement(d.front().geometry(), 0));
  for (std::size_t i = 0; i < m; ++i) e[i * m + i] = d[i];
  return TorusMatrix(m, std::move(e));
}

TorusMatrix TorusMatrix::constant(const TorusGeometry& g, const Eigen::MatrixXcd& c, int radius) {
  if (c.rows() != c.cols()) throw Error("constant matrix must be square");
  auto m = static_cast<std::size_t>(c.rows());
  TorusMatrix a(g, m, radius);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      a.entries_[i * m + j] = AlgebraElement::scalar(g, c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), radius);
    }
  }
  return a;
}

TorusMatrix TorusMatrix::block_diagonal(const std::vector<TorusMatrix>& blocks) {
  if (blocks.empty()) throw Error("block_diagonal needs at least one block");
  std::size_t m = 0;
  for (const auto& b : blocks) m += b.size();
  TorusMatrix a(blocks.front().geometry(), m, 0);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) a.entries_[(off + i) * m + off + j] = b(i, j);
    }
    off += b.size();
  }
  a.normalise_radius();
  return a;
}

void TorusMatrix::set(std::size_t i, std::size_t j, const AlgebraElement& x) {
  require_same_geometry(entries_.front(), x);
  entries_[i * m_ + j] = x;
  normalise_radius();
}

TorusMatrix TorusMatrix::resized(int r) const {
  TorusMatrix a = *this;
  for (auto& e : a.entries_) e = e.resized(r);
  return a;
}

int TorusMatrix::support_radius(double tol) const noexcept {
  int r = 0;
  for (const auto& e : entries_) r = std::max(r, e.support_radius(tol));
  return r;
}

TorusMatrix& TorusMatrix::operator+=(const TorusMatrix& b) {
  if (b.m_ != m_) throw Error("matrix size mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += b.entries_[i];
  normalise_radius();
  return *this;
}

TorusMatrix& TorusMatrix::operator-=(const TorusMatrix& b) {
  if (b.m_ != m_) throw Error("matrix size mismatch");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= b.entries_[i];
  normalise_radius();
  return *this;
}

TorusMatrix& TorusMatrix::operator*=(Complex c) {
  for (auto& e : entries_) e *= c;
  return *this;
}

TorusMatrix operator+(TorusMatrix a, const TorusMatrix& b) { return a += b; }
TorusMatrix operator-(TorusMatrix a, const TorusMatrix& b) { return a -= b; }
TorusMatrix operator*(Complex c, TorusMatrix a) { return a *= c; }

namespace {

TorusMatrix product(const TorusMatrix& a, const TorusMatrix& b, int radius) {
  if (a.size() != b.size()) throw Error("matrix size mismatch");
  std::size_t m = a.size();
  std::vector<AlgebraElement> e;
  e.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      AlgebraElement s(a.geometry(), radius);
      for (std::size_t l = 0; l < m; ++l) s += multiply_to_radius(a(i, l), b(l, j), radius);
      e.push_back(std::move(s));
    }
  }
  return TorusMatrix(m, std::move(e));
}

}  // namespace

TorusMatrix multiply(const TorusMatrix& a, const TorusMatrix& b, ProductMode mode) {
  int r = mode == ProductMode::exact ? a.radius() + b.radius() : std::max(a.radius(), b.radius());
  return product(a, b, r);
}

TorusMatrix multiply_to_radius(const TorusMatrix& a, const TorusMatrix& b, int radius) {
  return product(a, b, radius);
}

TorusMatrix scale_left(const AlgebraElement& x, const TorusMatrix& a, ProductMode mode) {
  std::vector<AlgebraElement> e;
  e.reserve(a.entries().size());
  for (const auto& v : a.entries()) e.push_back(multiply(x, v, mode));
  return TorusMatrix(a.size(), std::move(e));
}

TorusMatrix adjoint(const TorusMatrix& a) {
  std::size_t m = a.size();
  std::vector<AlgebraElement> e;
  e.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) e.push_back(adjoint(a(j, i)));
  }
  return TorusMatrix(m, std::move(e));
}

TorusMatrix transpose(const TorusMatrix& a) {
  std::size_t m = a.size();
  std::vector<AlgebraElement> e;
  e.reserve(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) e.push_back(a(j, i));
  }
  return TorusMatrix(m, std::move(e));
}

AlgebraElement matrix_trace(const TorusMatrix& h) {
  AlgebraElement s(h.geometry(), h.radius());
  for (std::size_t i = 0; i < h.size(); ++i) s += h(i, i);
  return s;
}

double max_abs_diff(const TorusMatrix& a, const TorusMatrix& b) {
  return max_abs_diff_within(a, b, std::max(a.radius(), b.radius()));
}

double max_abs_diff_within(const TorusMatrix& a, const TorusMatrix& b, int radius) {
  if (a.size() != b.size()) throw Error("matrix size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    m = std::max(m, max_abs_diff_within(a.entries()[i], b.entries()[i], radius));
  }
  return m;
}

double selfadjoint_residual(const TorusMatrix& a) noexcept {
  double r = 0.0;
  std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const AlgebraElement& x = a(i, j);
      const AlgebraElement& y = a(j, i);
      const LatticeBox& b = x.box();
      for (std::size_t k = 0; k < x.size(); ++k) r = std::max(r, std::abs(x[k] - std::conj(y[b.negated_index(k)])));
    }
  }
  return r;
}

bool is_selfadjoint(const TorusMatrix& a, double tol) noexcept { return selfadjoint_residual(a) <= tol; }

double entry_selfadjoint_residual(const TorusMatrix& a) noexcept {
  double r = 0.0;
  for (const auto& e : a.entries()) r = std::max(r, selfadjoint_residual(e));
  return r;
}

namespace {

AlgebraElement trimmed(const AlgebraElement& x) { return x.resized(x.support_radius()); }

}  // namespace

double compatibility_residual(const TorusMatrix& a, const TorusMatrix& b) {
  std::vector<AlgebraElement> ea, eb;
  for (const auto& x : a.entries()) ea.push_back(trimmed(x));
  for (const auto& x : b.entries()) eb.push_back(trimmed(x));
  double r = 0.0;
  for (const auto& x : ea) {
    for (const auto& y : eb) r = std::max(r, max_abs(commutator(x, y)));
  }
  return r;
}

double self_compatibility_residual(const TorusMatrix& a) {
  std::vector<AlgebraElement> e;
  for (const auto& x : a.entries()) e.push_back(trimmed(x));
  double r = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) r = std::max(r, max_abs(commutator(e[i], e[j])));
  }
  return r;
}

bool is_self_compatible(const TorusMatrix& a, double tol) { return self_compatibility_residual(a) <= tol; }

bool are_compatible(const TorusMatrix& a, const TorusMatrix& b, double tol) {
  return compatibility_residual(a, b) <= tol;
}

double commutation_residual(const TorusMatrix& a, const TorusMatrix& b) {
  TorusMatrix ab = multiply(a.resized(a.support_radius()), b.resized(b.support_radius()));
  TorusMatrix ba = multiply(b.resized(b.support_radius()), a.resized(a.support_radius()));
  return max_abs_diff(ab, ba);
}

}  // namespace nct
