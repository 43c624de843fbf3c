#include "nctorus/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nctorus/error.hpp"

namespace nct {

AlgebraElement::AlgebraElement(TorusGeometry geometry, int radius)
    : geometry_(std::move(geometry)), box_(geometry_.dim(), radius), coeffs_(box_.size()) {}

AlgebraElement::AlgebraElement(TorusGeometry geometry, int radius, std::vector<Complex> coeffs)
    : geometry_(std::move(geometry)), box_(geometry_.dim(), radius), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != box_.size()) throw Error("coefficient table size does not match the box");
}

AlgebraElement AlgebraElement::scalar(const TorusGeometry& g, Complex c, int radius) {
  AlgebraElement u(g, radius);
  u.coeffs_[u.box_.center_index()] = c;
  return u;
}

AlgebraElement AlgebraElement::basis(const TorusGeometry& g, std::span<const int> k, Complex c, int radius) {
  if (k.size() != static_cast<std::size_t>(g.dim())) throw GeometryMismatch("mode has wrong length");
  int r = radius;
  for (int v : k) r = std::max(r, std::abs(v));
  AlgebraElement u(g, r);
  u.coeffs_[u.box_.index_of(k)] = c;
  return u;
}

Complex AlgebraElement::coeff(std::span<const int> k) const noexcept {
  if (k.size() != static_cast<std::size_t>(box_.dim()) || !box_.contains(k)) return {};
  return coeffs_[box_.index_of(k)];
}

void AlgebraElement::set_coeff(std::span<const int> k, Complex c) {
  if (k.size() != static_cast<std::size_t>(box_.dim())) throw GeometryMismatch("mode has wrong length");
  if (!box_.contains(k)) throw Error("mode outside the element's box");
  coeffs_[box_.index_of(k)] = c;
}

void AlgebraElement::add_coeff(std::span<const int> k, Complex c) {
  if (k.size() != static_cast<std::size_t>(box_.dim())) throw GeometryMismatch("mode has wrong length");
  if (!box_.contains(k)) throw Error("mode outside the element's box");
  coeffs_[box_.index_of(k)] += c;
}

AlgebraElement AlgebraElement::resized(int r) const {
  if (r == radius()) return *this;
  AlgebraElement out(geometry_, r);
  const LatticeBox& small = r < radius() ? out.box_ : box_;
  for (std::size_t i = 0; i < small.size(); ++i) {
    auto k = small.mode(i);
    out.coeffs_[out.box_.index_of(k)] = coeffs_[box_.index_of(k)];
  }
  return out;
}

int AlgebraElement::support_radius(double tol) const noexcept {
  int r = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (std::abs(coeffs_[i]) > tol) r = std::max(r, box_.shell(i));
  }
  return r;
}

bool AlgebraElement::is_zero(double tol) const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [tol](Complex c) { return std::abs(c) <= tol; });
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& v) {
  require_same_geometry(*this, v);
  if (v.radius() > radius()) *this = resized(v.radius());
  if (v.radius() == radius()) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += v.coeffs_[i];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) coeffs_[box_.index_of(v.box_.mode(i))] += v.coeffs_[i];
  }
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& v) {
  require_same_geometry(*this, v);
  if (v.radius() > radius()) *this = resized(v.radius());
  if (v.radius() == radius()) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= v.coeffs_[i];
  } else {
    for (std::size_t i = 0; i < v.size(); ++i) coeffs_[box_.index_of(v.box_.mode(i))] -= v.coeffs_[i];
  }
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex c) {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

AlgebraElement operator+(AlgebraElement u, const AlgebraElement& v) { return u += v; }
AlgebraElement operator-(AlgebraElement u, const AlgebraElement& v) { return u -= v; }
AlgebraElement operator-(AlgebraElement u) { return u *= -1.0; }
AlgebraElement operator*(Complex c, AlgebraElement u) { return u *= c; }
AlgebraElement operator*(AlgebraElement u, Complex c) { return u *= c; }

void require_same_geometry(const AlgebraElement& u, const AlgebraElement& v) {
  if (!(u.geometry() == v.geometry())) throw GeometryMismatch("elements live on different tori");
}

namespace {

struct Support {
  std::vector<std::size_t> index;  // position in the element's table
  std::vector<int> coords;         // n coordinates per entry
  std::vector<Complex> value;
};

Support nonzero_support(const AlgebraElement& u) {
  Support s;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == Complex{}) continue;
    s.index.push_back(i);
    auto k = u.box().mode(i);
    s.coords.insert(s.coords.end(), k.begin(), k.end());
    s.value.push_back(u[i]);
  }
  return s;
}

// Twisted convolution onto the box of the given radius.  Outer loop over supp(u) in table
// order, inner loop over supp(v) in table order: a fixed summation order for every output mode.
AlgebraElement convolve(const AlgebraElement& u, const AlgebraElement& v, int radius) {
  require_same_geometry(u, v);
  const int n = u.geometry().dim();
  AlgebraElement out(u.geometry(), radius);
  Support su = nonzero_support(u);
  Support sv = nonzero_support(v);
  if (su.value.empty() || sv.value.empty()) return out;

  int range = 2 * std::max(u.radius(), 1) * std::max(v.radius(), 1);
  CocycleEvaluator sigma(u.geometry(), range);

  const LatticeBox& ob = out.box();
  const long long side = ob.side();
  std::vector<long long> stride(static_cast<std::size_t>(n));
  {
    long long s = 1;
    for (int i = n - 1; i >= 0; --i) {
      stride[static_cast<std::size_t>(i)] = s;
      s *= side;
    }
  }
  auto linear = [&](const int* k) {
    long long idx = 0;
    for (int i = 0; i < n; ++i) idx += static_cast<long long>(k[i]) * stride[static_cast<std::size_t>(i)];
    return idx;
  };
  std::vector<long long> lu(su.value.size()), lv(sv.value.size());
  for (std::size_t a = 0; a < su.value.size(); ++a) lu[a] = linear(&su.coords[a * n]);
  for (std::size_t b = 0; b < sv.value.size(); ++b) lv[b] = linear(&sv.coords[b * n]);
  const long long centre = static_cast<long long>(ob.center_index());
  const bool clip = radius < u.radius() + v.radius();
  auto coeffs = out.coeffs();

  for (std::size_t a = 0; a < su.value.size(); ++a) {
    const int* p = &su.coords[a * n];
    const Complex up = su.value[a];
    for (std::size_t b = 0; b < sv.value.size(); ++b) {
      const int* q = &sv.coords[b * n];
      if (clip) {
        bool inside = true;
        for (int i = 0; i < n; ++i) {
          int s = p[i] + q[i];
          if (s < -radius || s > radius) {
            inside = false;
            break;
          }
        }
        if (!inside) continue;
      }
      coeffs[static_cast<std::size_t>(centre + lu[a] + lv[b])] += up * sv.value[b] * sigma(p, q);
    }
  }
  return out;
}

}  // namespace

AlgebraElement multiply(const AlgebraElement& u, const AlgebraElement& v, ProductMode mode) {
  int r = mode == ProductMode::exact ? u.radius() + v.radius() : std::max(u.radius(), v.radius());
  return convolve(u, v, r);
}

AlgebraElement multiply_to_radius(const AlgebraElement& u, const AlgebraElement& v, int radius) {
  return convolve(u, v, radius);
}

AlgebraElement commutator(const AlgebraElement& u, const AlgebraElement& v, ProductMode mode) {
  return multiply(u, v, mode) - multiply(v, u, mode);
}

AlgebraElement adjoint(const AlgebraElement& u) {
  AlgebraElement out(u.geometry(), u.radius());
  const LatticeBox& b = u.box();
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::conj(u[b.negated_index(i)]);
  return out;
}

AlgebraElement derivation(const AlgebraElement& u, int axis) {
  if (axis < 0 || axis >= u.geometry().dim()) throw Error("derivation axis out of range");
  AlgebraElement out(u.geometry(), u.radius());
  const LatticeBox& b = u.box();
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = Complex(0.0, static_cast<double>(b.mode_ptr(i)[axis])) * u[i];
  }
  return out;
}

Complex trace(const AlgebraElement& u) noexcept { return u[u.box().center_index()]; }

Complex trace_of_product(const AlgebraElement& u, const AlgebraElement& v) {
  require_same_geometry(u, v);
  // tau(uv) = sum_p u_p v_{-p}, since sigma(p, -p) = 1.
  const AlgebraElement& small = u.radius() <= v.radius() ? u : v;
  const AlgebraElement& big = u.radius() <= v.radius() ? v : u;
  const int n = small.geometry().dim();
  std::vector<int> neg(static_cast<std::size_t>(n));
  Complex s{};
  for (std::size_t i = 0; i < small.size(); ++i) {
    if (small[i] == Complex{}) continue;
    const int* k = small.box().mode_ptr(i);
    for (int j = 0; j < n; ++j) neg[static_cast<std::size_t>(j)] = -k[j];
    s += small[i] * big[big.box().index_of(neg)];
  }
  return s;
}

Complex inner_product(const AlgebraElement& u, const AlgebraElement& v) {
  return trace_of_product(adjoint(v), u);
}

Complex inner_product_nu(const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& nu) {
  return trace_of_product(multiply(u, nu), adjoint(v));
}

Complex inner_product_nu_opp(const AlgebraElement& u, const AlgebraElement& v, const AlgebraElement& nu) {
  return trace_of_product(adjoint(v), multiply(nu, u));
}

double sobolev_norm(const AlgebraElement& u, double s) {
  const int n = u.geometry().dim();
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == Complex{}) continue;
    const int* k = u.box().mode_ptr(i);
    double k2 = 0.0;
    for (int j = 0; j < n; ++j) k2 += static_cast<double>(k[j]) * k[j];
    acc += std::pow(1.0 + k2, s) * std::norm(u[i]);
  }
  return std::sqrt(acc);
}

double max_abs_diff_within(const AlgebraElement& u, const AlgebraElement& v, int radius) {
  require_same_geometry(u, v);
  int r = std::min(radius, std::max(u.radius(), v.radius()));
  LatticeBox b(u.geometry().dim(), r);
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    auto k = b.mode(i);
    m = std::max(m, std::abs(u.coeff(k) - v.coeff(k)));
  }
  return m;
}

double max_abs_diff(const AlgebraElement& u, const AlgebraElement& v) {
  return max_abs_diff_within(u, v, std::max(u.radius(), v.radius()));
}

double max_abs(const AlgebraElement& u) noexcept {
  double m = 0.0;
  for (Complex c : u.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

double selfadjoint_residual(const AlgebraElement& u) noexcept {
  double m = 0.0;
  const LatticeBox& b = u.box();
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - std::conj(u[b.negated_index(i)])));
  return m;
}

bool is_selfadjoint(const AlgebraElement& u, double tol) noexcept { return selfadjoint_residual(u) <= tol; }

Complex ordered_monomial_phase(const TorusGeometry& g, std::span<const int> k) {
  const int n = g.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s += static_cast<double>(k[j]) * g.theta(j, i) * static_cast<double>(k[i]);
  }
  double a = std::numbers::pi * s;
  return {std::cos(a), std::sin(a)};
}

AlgebraElement from_ordered_monomials(const AlgebraElement& a) {
  AlgebraElement u(a.geometry(), a.radius());
  for (std::size_t i = 0; i < a.size(); ++i) u[i] = a[i] * ordered_monomial_phase(a.geometry(), a.box().mode(i));
  return u;
}

AlgebraElement to_ordered_monomials(const AlgebraElement& u) {
  AlgebraElement a(u.geometry(), u.radius());
  for (std::size_t i = 0; i < u.size(); ++i) {
    a[i] = u[i] * std::conj(ordered_monomial_phase(u.geometry(), u.box().mode(i)));
  }
  return a;
}

}  // namespace nct
