#include <doctest.h>

#include <cmath>
#include <numbers>

#include "support/random_inputs.hpp"

using namespace nct;
using namespace nct::testing;

namespace {

AlgebraElement V(const TorusGeometry& g, std::initializer_list<int> k) { return AlgebraElement::basis(g, k); }

AlgebraElement bump(const TorusGeometry& g, double a, double b) {
  return a * (V(g, {1, 0}) + V(g, {-1, 0})) + b * (V(g, {0, 1}) + V(g, {0, -1}));
}

// g(t) = [[2 + t, t / 2], [t / 2, 1.5 + t^2 / 2]], positive definite for t > -1.2.
MatrixFunction quadratic_family() {
  MatrixFunction f;
  f.size = 2;
  f.domain_min = -1.2;
  f.domain_max = 10.0;
  f.value = [](double t) {
    Eigen::MatrixXd m(2, 2);
    m << 2.0 + t, 0.5 * t, 0.5 * t, 1.5 + 0.5 * t * t;
    return m;
  };
  return f;
}

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("flat metric") {
    TorusGeometry g = TorusGeometry::plane(0.4);
    LatticeBox box(2, 4);
    RiemannianMetric m = metric_flat(g, box);
    CHECK(max_abs_diff(m.matrix(), TorusMatrix::identity(g, 2)) == 0.0);
    CHECK(m.report().valid);
    CHECK(max_abs_diff(determinant(m.matrix(), box), AlgebraElement::identity(g)) < 1e-14);
    CHECK(max_abs_diff(riemannian_density(m).element(), AlgebraElement::identity(g)) < 1e-14);
    CHECK(std::abs(volume(m) - kTwoPi * kTwoPi) < 1e-12);
    TorusGeometry g3 = TorusGeometry::commutative(3);
    CHECK(std::abs(volume(metric_flat(g3, LatticeBox(3, 1))) - std::pow(kTwoPi, 3)) < 1e-11);
  }

  TEST_CASE("flat volume does not depend on theta") {
    for (double t : {0.0, 0.1, 1.0 / std::sqrt(2.0), 0.9}) {
      CHECK(std::abs(volume(metric_flat(TorusGeometry::plane(t), LatticeBox(2, 2))) - kTwoPi * kTwoPi) < 1e-12);
    }
  }

  TEST_CASE("conformal metrics") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    RiemannianMetric flat = metric_flat(g, box);
    RiemannianMetric four = metric_conformal(flat, AlgebraElement::scalar(g, 2.0));
    CHECK(max_abs_diff(four.matrix(), 4.0 * TorusMatrix::identity(g, 2)) < 1e-15);

    AlgebraElement k = functional_calculus(bump(g, 0.15, 0.1), ScalarFunction::exp(), box);
    RiemannianMetric ct = metric_conformal(flat, k);
    AlgebraElement k2 = multiply(k, k);
    CHECK(max_abs_diff(ct.matrix()(0, 0), k2) < 1e-12);
    CHECK(max_abs_diff(ct.matrix()(1, 1), k2) < 1e-12);
    CHECK(ct.matrix()(0, 1).is_zero(1e-15));
    // nu(k^2 I_n) = k^n
    CHECK(max_abs_diff_within(riemannian_density(ct).element(), k2, 5) < 1e-8);
    CHECK_THROWS_AS(metric_conformal(flat, V(g, {1, 0}) + V(g, {-1, 0})), PositivityViolation);
  }

  TEST_CASE("density scales by k^n under commuting conformal changes") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    AlgebraElement a = bump(g, 0.3, 0.2);
    RiemannianMetric base = metric_functional(a, quadratic_family(), box);
    AlgebraElement k = functional_calculus(0.5 * a, ScalarFunction::exp(), box);
    RiemannianMetric scaled = metric_conformal(base, k);
    AlgebraElement nu = riemannian_density(base).element();
    AlgebraElement k2 = multiply(k, k);
    AlgebraElement lhs = riemannian_density(scaled).element();
    CHECK(max_abs_diff_within(lhs, multiply(k2, nu), 4) < 1e-8);
    CHECK(max_abs_diff_within(lhs, multiply(nu, k2), 4) < 1e-8);
  }

  TEST_CASE("product metric density is the product of block densities") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    AlgebraElement a = bump(g, 0.3, 0.2);
    AlgebraElement k1 = functional_calculus(0.4 * a, ScalarFunction::exp(), box);
    AlgebraElement k2 = functional_calculus(-0.3 * a, ScalarFunction::exp(), box);
    RiemannianMetric b1 = RiemannianMetric::validate(TorusMatrix::from_element(multiply(k1, k1)), box);
    RiemannianMetric b2 = RiemannianMetric::validate(TorusMatrix::from_element(multiply(k2, k2)), box);
    RiemannianMetric p = metric_product({b1, b2});
    CHECK(p.report().block_compatibility_residual < 1e-12);
    AlgebraElement expected = multiply(k1, k2);
    CHECK(max_abs_diff_within(riemannian_density(p).element(), expected, 4) < 1e-8);
    AlgebraElement blocks = multiply(riemannian_density(b1).element(), riemannian_density(b2).element());
    CHECK(max_abs_diff_within(riemannian_density(p).element(), blocks, 4) < 1e-8);
  }

  TEST_CASE("functional metrics") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 8);
    AlgebraElement a = bump(g, 0.3, 0.2);
    MatrixFunction constant;
    constant.size = 2;
    constant.value = [](double) {
      Eigen::MatrixXd m(2, 2);
      m << 2.0, 0.5, 0.5, 1.0;
      return m;
    };
    RiemannianMetric c = metric_functional(a, constant, box);
    Eigen::MatrixXcd expected(2, 2);
    expected << 2.0, 0.5, 0.5, 1.0;
    CHECK(max_abs_diff(c.matrix(), TorusMatrix::constant(g, expected)) < 1e-13);

    RiemannianMetric q = metric_functional(a, quadratic_family(), box);
    CHECK(self_compatibility_residual(q.matrix()) < 1e-12);
    // g_11 = 2 + a exactly (polynomial of degree one)
    CHECK(max_abs_diff_within(q.matrix()(0, 0), 2.0 * AlgebraElement::identity(g) + a, 4) < 1e-12);

    MatrixFunction narrow = quadratic_family();
    narrow.domain_min = 0.0;
    CHECK_THROWS_AS(metric_functional(a, narrow, box), SpectrumOutsideDomain);
  }

  TEST_CASE("density squared is the determinant") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    RiemannianMetric q = metric_functional(bump(g, 0.3, 0.2), quadratic_family(), box);
    AlgebraElement nu = riemannian_density(q).element();
    CHECK(max_abs_diff_within(multiply(nu, nu), determinant(q.matrix(), box), 4) < 1e-8);
  }

  TEST_CASE("weights") {
    Rng rng(31);
    TorusGeometry g = random_plane(rng);
    LatticeBox box(2, 12);
    Density nu = Density::from_element(random_positive(g, 1, 0.3, 0.5, rng), box);
    auto [nu_lo, nu_hi] = spectral_bounds(nu.element(), box);
    AlgebraElement nu_inv = inverse(nu.element(), box);
    auto [inv_lo, inv_hi] = spectral_bounds(0.5 * (nu_inv + adjoint(nu_inv)), box);
    for (int t = 0; t < 5; ++t) {
      AlgebraElement y = random_element(g, 2, 1.0, rng);
      AlgebraElement x = multiply(adjoint(y), y);
      Complex w = weight(nu, x);
      CHECK(w.real() >= 0.0);
      CHECK(std::abs(w.imag()) < 1e-12);
      double tau = trace(x).real();
      double scaled = w.real() / std::pow(kTwoPi, 2);
      CHECK(tau / inv_hi <= scaled * (1.0 + 1e-12));
      CHECK(scaled <= nu_hi * tau * (1.0 + 1e-12));
    }
    CHECK(std::abs(weight(Density::unit(g), AlgebraElement::identity(g)) - kTwoPi * kTwoPi) < 1e-12);
    CHECK(volume(nu) > 0.0);
  }

  TEST_CASE("orthogonal invariance") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    RiemannianMetric q = metric_functional(bump(g, 0.3, 0.2), quadratic_family(), box);
    OrthogonalInvarianceReport id = orthogonal_invariance_check(q, TorusMatrix::identity(g, 2));
    CHECK(id.orthogonal);
    CHECK(id.volume_residual < 1e-12);
    CHECK(id.density_residual < 1e-12);

    Eigen::MatrixXcd rot(2, 2);
    rot << std::cos(0.9), -std::sin(0.9), std::sin(0.9), std::cos(0.9);
    OrthogonalInvarianceReport r = orthogonal_invariance_check(q, TorusMatrix::constant(g, rot));
    CHECK(r.orthogonal);
    CHECK(r.density_residual < 1e-8);
    CHECK(r.volume_residual < 1e-8);

    Eigen::MatrixXcd perm(2, 2);
    perm << 0.0, -1.0, 1.0, 0.0;
    OrthogonalInvarianceReport s = orthogonal_invariance_check(q, TorusMatrix::constant(g, perm));
    CHECK(s.density_residual < 1e-8);
    CHECK(s.volume_residual < 1e-8);
  }

  TEST_CASE("validation rejects the non-commuting worked example") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    AlgebraElement a = 0.5 * (V(g, {1, 0}) + V(g, {-1, 0}));
    AlgebraElement b = 0.5 * (V(g, {0, 1}) + V(g, {0, -1}));
    AlgebraElement one = AlgebraElement::identity(g);
    TorusMatrix y(2, {one, a, AlgebraElement::zero(g), b});
    TorusMatrix h = make_positive(y, 0.1).value;
    MetricValidation v = RiemannianMetric::inspect(h, box);
    CHECK(v.entry_selfadjoint_residual < 1e-14);
    CHECK(v.inverse_entry_selfadjoint_residual > 1e-3);
    CHECK_FALSE(v.valid);
    CHECK_THROWS_AS(RiemannianMetric::validate(h, box), InvalidMetric);

    // Same construction with commuting a, b is accepted.
    AlgebraElement b2 = 0.5 * (V(g, {2, 0}) + V(g, {-2, 0}));
    TorusMatrix ok = make_positive(TorusMatrix(2, {one, a, AlgebraElement::zero(g), b2}), 0.1).value;
    CHECK(RiemannianMetric::inspect(ok, box).valid);
  }

  TEST_CASE("validation rejects non-selfadjoint entries and non-positive matrices") {
    TorusGeometry g = TorusGeometry::plane(0.3);
    LatticeBox box(2, 6);
    AlgebraElement one = AlgebraElement::identity(g);
    TorusMatrix skew(2, {one, Complex(0.0, 0.2) * one, Complex(0.0, -0.2) * one, one});
    CHECK_FALSE(RiemannianMetric::inspect(skew, box).valid);
    TorusMatrix neg = TorusMatrix::diagonal({one, -1.0 * one});
    MetricValidation v = RiemannianMetric::inspect(neg, box);
    CHECK_FALSE(v.positive);
    CHECK_FALSE(v.valid);
    CHECK_THROWS_AS(Density::from_element(-1.0 * one, box), PositivityViolation);
  }
}
