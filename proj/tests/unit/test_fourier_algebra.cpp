#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/random_inputs.hpp"

using namespace nct;
using namespace nct::testing;

namespace {

// Twisted convolution written out term by term, with the phase recomputed from theta.
AlgebraElement brute_force_product(const AlgebraElement& u, const AlgebraElement& v) {
  const TorusGeometry& g = u.geometry();
  const int n = g.dim();
  AlgebraElement out(g, u.radius() + v.radius());
  for (std::size_t a = 0; a < u.size(); ++a) {
    for (std::size_t b = 0; b < v.size(); ++b) {
      auto p = u.box().mode(a);
      auto q = v.box().mode(b);
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s += q[i] * g.theta(i, j) * p[j];
      }
      std::vector<int> k(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) k[i] = p[i] + q[i];
      out.add_coeff(k, u[a] * v[b] * std::exp(Complex(0.0, std::numbers::pi * s)));
    }
  }
  return out;
}

AlgebraElement V(const TorusGeometry& g, std::initializer_list<int> k) { return AlgebraElement::basis(g, k); }

}  // namespace

TEST_SUITE("fourier_algebra") {
  TEST_CASE("lattice box enumeration is a bijection with the last axis fastest") {
    LatticeBox b(3, 2);
    CHECK(b.size() == 125);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index_of(b.mode(i)) == i);
    std::vector<int> k{-2, -2, -1};
    CHECK(b.index_of(k) == 1);
    std::vector<int> zero{0, 0, 0};
    CHECK(b.index_of(zero) == b.center_index());
    std::vector<int> m{1, -2, 0};
    std::vector<int> neg{-1, 2, 0};
    CHECK(b.negated_index(b.index_of(m)) == b.index_of(neg));
  }

  TEST_CASE("geometry rejects malformed theta") {
    CHECK_THROWS_AS(TorusGeometry(2, {0.0, 0.3, 0.3, 0.0}), Error);
    CHECK_THROWS_AS(TorusGeometry(2, {0.1, 0.3, -0.3, 0.0}), Error);
    CHECK_THROWS_AS(TorusGeometry(1, {0.0}), Error);
    CHECK_THROWS_AS(TorusGeometry(kMaxDimension + 1, std::vector<double>((kMaxDimension + 1) * (kMaxDimension + 1))),
                    Error);
  }

  TEST_CASE("cocycle phase ratio reproduces the commutation phase") {
    TorusGeometry g = TorusGeometry::plane(0.3);
    std::vector<int> e1{1, 0}, e2{0, 1};
    Complex ratio = g.cocycle(e2, e1) / g.cocycle(e1, e2);
    CHECK(std::abs(ratio - std::exp(Complex(0.0, 2.0 * std::numbers::pi * 0.3))) < 1e-15);
  }

  TEST_CASE("cocycle is trivial on the diagonal and for theta = 0") {
    Rng rng(11);
    TorusGeometry g(3, {0.0, 0.4, -0.2, -0.4, 0.0, 0.7, 0.2, -0.7, 0.0});
    TorusGeometry c = TorusGeometry::commutative(3);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int t = 0; t < 50; ++t) {
      std::vector<int> p{d(rng), d(rng), d(rng)}, q{d(rng), d(rng), d(rng)};
      CHECK(std::abs(g.cocycle(p, p) - 1.0) < 1e-14);
      CHECK(c.cocycle(p, q) == Complex(1.0, 0.0));
    }
  }

  TEST_CASE("multiply matches the term-by-term twisted convolution") {
    Rng rng(3);
    for (int t = 0; t < 5; ++t) {
      TorusGeometry g = random_plane(rng);
      AlgebraElement u = random_element(g, 3, 1.0, rng);
      AlgebraElement v = random_element(g, 2, 1.0, rng);
      CHECK(max_abs_diff(multiply(u, v), brute_force_product(u, v)) < 1e-13);
    }
    TorusGeometry g3(3, {0.0, 0.4, -0.2, -0.4, 0.0, 0.7, 0.2, -0.7, 0.0});
    AlgebraElement u = random_element(g3, 2, 1.0, rng);
    AlgebraElement v = random_element(g3, 1, 1.0, rng);
    CHECK(max_abs_diff(multiply(u, v), brute_force_product(u, v)) < 1e-13);
  }

  TEST_CASE("truncated products agree with exact products on the smaller box") {
    Rng rng(4);
    TorusGeometry g = random_plane(rng);
    AlgebraElement u = random_element(g, 3, 1.0, rng);
    AlgebraElement v = random_element(g, 2, 1.0, rng);
    AlgebraElement exact = multiply(u, v);
    AlgebraElement cut = multiply(u, v, ProductMode::truncate);
    CHECK(cut.radius() == 3);
    CHECK(exact.radius() == 5);
    CHECK(max_abs_diff(cut, exact.resized(3)) < 1e-14);
    CHECK(max_abs_diff(multiply_to_radius(u, v, 4), exact.resized(4)) < 1e-14);
  }

  TEST_CASE("unit, generator relation and adjoint of basis elements") {
    Rng rng(5);
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    AlgebraElement u = random_element(g, 3, 1.0, rng);
    CHECK(max_abs_diff(multiply(AlgebraElement::identity(g), u), u) == 0.0);
    CHECK(max_abs_diff(multiply(u, AlgebraElement::identity(g)), u) == 0.0);

    AlgebraElement lhs = multiply(V(g, {0, 1}), V(g, {1, 0}));
    AlgebraElement rhs = std::exp(Complex(0.0, 2.0 * std::numbers::pi * g.theta(0, 1))) * multiply(V(g, {1, 0}), V(g, {0, 1}));
    CHECK(max_abs_diff(lhs, rhs) < 1e-15);

    std::vector<int> p{2, -3};
    AlgebraElement vp = AlgebraElement::basis(g, p);
    AlgebraElement vp_star = adjoint(vp);
    CHECK(vp_star.coeff({-2, 3}) == Complex(1.0, 0.0));
    CHECK(max_abs_diff(multiply(vp, vp_star), AlgebraElement::identity(g)) < 1e-15);
  }

  TEST_CASE("adjoint is an involution and reverses products") {
    Rng rng(6);
    for (int t = 0; t < 5; ++t) {
      TorusGeometry g = random_plane(rng);
      AlgebraElement u = random_element(g, 3, 1.0, rng);
      AlgebraElement v = random_element(g, 3, 1.0, rng);
      CHECK(max_abs_diff(adjoint(adjoint(u)), u) == 0.0);
      CHECK(max_abs_diff(adjoint(multiply(u, v)), multiply(adjoint(v), adjoint(u))) < 1e-14);
      CHECK(max_abs_diff(adjoint(AlgebraElement::identity(g)), AlgebraElement::identity(g)) == 0.0);
      CHECK(is_selfadjoint(random_selfadjoint(g, 2, 1.0, rng), 1e-16));
    }
  }

  TEST_CASE("associativity of exact products") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
      TorusGeometry g = random_plane(rng);
      AlgebraElement u = random_element(g, 2, 1.0, rng);
      AlgebraElement v = random_element(g, 2, 1.0, rng);
      AlgebraElement w = random_element(g, 2, 1.0, rng);
      CHECK(max_abs_diff(multiply(multiply(u, v), w), multiply(u, multiply(v, w))) < 1e-13);
    }
  }

  TEST_CASE("derivations act diagonally and integrate to zero") {
    Rng rng(8);
    TorusGeometry g = random_plane(rng);
    AlgebraElement e1 = V(g, {1, 0});
    CHECK(max_abs_diff(derivation(e1, 0), Complex(0.0, 1.0) * e1) == 0.0);
    CHECK(derivation(AlgebraElement::identity(g), 1).is_zero());
    for (int t = 0; t < 5; ++t) {
      AlgebraElement u = random_element(g, 3, 1.0, rng);
      AlgebraElement v = random_element(g, 3, 1.0, rng);
      for (int j = 0; j < 2; ++j) {
        CHECK(std::abs(trace(derivation(u, j))) == 0.0);
        Complex a = trace(multiply(u, derivation(v, j)));
        Complex b = -trace(multiply(derivation(u, j), v));
        CHECK(std::abs(a - b) < 1e-13);
        // Leibniz rule
        AlgebraElement lhs = derivation(multiply(u, v), j);
        AlgebraElement rhs = multiply(derivation(u, j), v) + multiply(u, derivation(v, j));
        CHECK(max_abs_diff(lhs, rhs) < 1e-12);
      }
    }
  }

  TEST_CASE("trace is normalised and tracial") {
    Rng rng(9);
    TorusGeometry g = random_plane(rng);
    CHECK(trace(AlgebraElement::identity(g)) == Complex(1.0, 0.0));
    CHECK(trace(V(g, {1, -1})) == Complex(0.0, 0.0));
    for (int t = 0; t < 5; ++t) {
      AlgebraElement u = random_element(g, 3, 1.0, rng);
      AlgebraElement v = random_element(g, 3, 1.0, rng);
      CHECK(std::abs(trace(multiply(u, v)) - trace(multiply(v, u))) < 1e-14);
      CHECK(std::abs(trace_of_product(u, v) - trace(multiply(u, v))) < 1e-14);
    }
  }

  TEST_CASE("inner products") {
    Rng rng(10);
    TorusGeometry g = random_plane(rng);
    CHECK(std::abs(inner_product(V(g, {1, 2}), V(g, {1, 2})) - 1.0) < 1e-15);
    CHECK(std::abs(inner_product(V(g, {1, 2}), V(g, {2, 1}))) == 0.0);
    AlgebraElement one = AlgebraElement::identity(g);
    AlgebraElement u = random_element(g, 2, 1.0, rng);
    AlgebraElement v = random_element(g, 2, 1.0, rng);
    Complex a = inner_product(u, v);
    CHECK(std::abs(inner_product_nu(u, v, one) - a) < 1e-14);
    CHECK(std::abs(inner_product_nu_opp(u, v, one) - a) < 1e-14);
    AlgebraElement nu = random_positive(g, 1, 0.3, 1.0, rng);
    CHECK(inner_product_nu(u, u, nu).real() > 0.0);
    CHECK(inner_product_nu_opp(u, u, nu).real() > 0.0);
  }

  TEST_CASE("Sobolev norms") {
    TorusGeometry g = TorusGeometry::plane(0.2);
    for (double s : {-1.0, 0.0, 0.5, 2.0}) {
      CHECK(std::abs(sobolev_norm(AlgebraElement::identity(g), s) - 1.0) < 1e-15);
      CHECK(std::abs(sobolev_norm(V(g, {2, -1}), s) - std::pow(6.0, 0.5 * s)) < 1e-12);
    }
    Rng rng(12);
    AlgebraElement u = random_element(g, 3, 1.0, rng);
    double prev = 0.0;
    for (double s = -2.0; s <= 2.0; s += 0.5) {
      double cur = sobolev_norm(u, s);
      CHECK(cur >= prev);
      prev = cur;
    }
  }

  TEST_CASE("ordered monomials differ from the Weyl basis by per-mode phases") {
    Rng rng(13);
    TorusGeometry g = random_plane(rng);
    // U_1 U_2 = c V_{(1,1)} and the conversion recovers the product of generators.
    AlgebraElement u12 = multiply(V(g, {1, 0}), V(g, {0, 1}));
    std::vector<int> k{1, 1};
    CHECK(std::abs(u12.coeff(k) - ordered_monomial_phase(g, k)) < 1e-15);
    AlgebraElement u = random_element(g, 3, 1.0, rng);
    CHECK(max_abs_diff(from_ordered_monomials(to_ordered_monomials(u)), u) < 1e-15);
    // U_1^2 U_2^{-1} from repeated products.
    AlgebraElement m = multiply(multiply(V(g, {1, 0}), V(g, {1, 0})), V(g, {0, -1}));
    std::vector<int> k2{2, -1};
    CHECK(std::abs(m.coeff(k2) - ordered_monomial_phase(g, k2)) < 1e-15);
  }

  TEST_CASE("resizing and support radius") {
    TorusGeometry g = TorusGeometry::plane(0.1);
    AlgebraElement u = V(g, {2, 0}) + V(g, {0, -1});
    CHECK(u.support_radius() == 2);
    AlgebraElement big = u.resized(5);
    CHECK(big.radius() == 5);
    CHECK(max_abs_diff(big, u) == 0.0);
    CHECK(u.resized(1).coeff({2, 0}) == Complex(0.0, 0.0));
    CHECK_THROWS_AS(multiply(u, V(TorusGeometry::plane(0.2), {1, 0})), GeometryMismatch);
  }
}
