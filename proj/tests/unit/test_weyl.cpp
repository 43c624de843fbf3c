#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "support/random_inputs.hpp"

using namespace nct;
using namespace nct::testing;

namespace {

constexpr double kPi = std::numbers::pi;

AlgebraElement V(const TorusGeometry& g, std::initializer_list<int> k) { return AlgebraElement::basis(g, k); }

AlgebraElement bump(const TorusGeometry& g, double a, double b) {
  return a * (V(g, {1, 0}) + V(g, {-1, 0})) + b * (V(g, {0, 1}) + V(g, {0, -1}));
}

// Sorted |k|^2 over a box large enough that the first `count` values are exact.
std::vector<double> lattice_eigenvalues(std::size_t count) {
  int r = 1;
  while (kPi * (r - 1) * (r - 1) < 2.0 * static_cast<double>(count)) ++r;
  std::vector<double> v;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) v.push_back(static_cast<double>(a * a + b * b));
  std::sort(v.begin(), v.end());
  v.resize(count);
  return v;
}

// Least-squares slope of log v[l] against log l over l in [first, last].
double slope(const std::vector<double>& v, std::size_t first, std::size_t last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double m = 0;
  for (std::size_t l = first; l <= last; ++l) {
    double x = std::log(static_cast<double>(l)), y = std::log(v[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    m += 1;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

SpectrumResult synthetic(const std::vector<double>& values) {
  SpectrumResult s;
  s.eigenvalues = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  s.reliable = values.size();
  s.resolved = values.size();
  s.stable.assign(values.size(), true);
  return s;
}

}  // namespace

TEST_SUITE("weyl") {
  TEST_CASE("unit ball volumes") {
    CHECK(std::abs(unit_ball_volume(1) - 2.0) < 1e-15);
    CHECK(std::abs(unit_ball_volume(2) - kPi) < 1e-15);
    CHECK(std::abs(unit_ball_volume(3) - 4.0 * kPi / 3.0) < 1e-14);
    CHECK(std::abs(unit_ball_volume(4) - kPi * kPi / 2.0) < 1e-14);
  }

  TEST_CASE("flat Weyl constants") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    WeylConstant c = weyl_constant(metric_flat(g, LatticeBox(2, 4)));
    CHECK(std::abs(c.quadrature - kPi) < 1e-12);
    REQUIRE(c.closed_form.has_value());
    CHECK(std::abs(*c.closed_form - kPi) < 1e-12);

    TorusGeometry g3 = TorusGeometry::commutative(3);
    WeylConstant c3 = weyl_constant(metric_flat(g3, LatticeBox(3, 1)), 16);
    CHECK(std::abs(c3.quadrature - 4.0 * kPi / 3.0) < 1e-10);
    REQUIRE(c3.closed_form.has_value());
    CHECK(std::abs(*c3.closed_form - 4.0 * kPi / 3.0) < 1e-10);
  }

  TEST_CASE("constant metric matches the ellipse integral") {
    // (1/2) int_{S^1} (xi^T h^{-1} xi)^{-1} = pi sqrt(det h)
    TorusGeometry g = TorusGeometry::plane(0.4);
    Eigen::MatrixXcd h(2, 2);
    h << 2.0, 0.7, 0.7, 1.3;
    WeylConstant c = weyl_constant(TorusMatrix::constant(g, h), LatticeBox(2, 2), 64);
    CHECK(std::abs(c.quadrature - kPi * std::sqrt(2.0 * 1.3 - 0.49)) < 1e-10);
  }

  TEST_CASE("quadrature agrees with the closed form") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 12);
    AlgebraElement k = functional_calculus(bump(g, 0.15, 0.1), ScalarFunction::exp(), box);
    WeylConstant c = weyl_constant(metric_conformal(metric_flat(g, box), k));
    REQUIRE(c.closed_form.has_value());
    CHECK(std::abs(c.quadrature - *c.closed_form) < 1e-6);

    MatrixFunction f;
    f.size = 2;
    f.domain_min = -1.2;
    f.domain_max = 10.0;
    f.value = [](double t) {
      Eigen::MatrixXd m(2, 2);
      m << 2.0 + t, 0.5 * t, 0.5 * t, 1.5 + 0.5 * t * t;
      return m;
    };
    WeylConstant q = weyl_constant(metric_functional(bump(g, 0.3, 0.2), f, box));
    REQUIRE(q.closed_form.has_value());
    CHECK(std::abs(q.quadrature - *q.closed_form) < 1e-6);
  }

  TEST_CASE("commutative conformal metric matches Bessel values") {
    // k^2 = exp(0.6 cos x + 0.4 cos y): c_2 = pi tau(k^2) = pi I0(0.6) I0(0.4)
    TorusGeometry g = TorusGeometry::commutative(2);
    LatticeBox box(2, 12);
    AlgebraElement k = functional_calculus(bump(g, 0.15, 0.1), ScalarFunction::exp(), box);
    WeylConstant c = weyl_constant(metric_conformal(metric_flat(g, box), k));
    double expected = kPi * std::cyl_bessel_i(0.0, 0.6) * std::cyl_bessel_i(0.0, 0.4);
    CHECK(std::abs(c.quadrature - expected) < 1e-10);
  }

  TEST_CASE("Weyl constant is homogeneous of degree n/2") {
    Rng rng(71);
    TorusGeometry g = random_plane(rng);
    LatticeBox box(2, 10);
    TorusMatrix h = random_positive_matrix(g, 2, 1, 0.15, 1.0, rng);
    h = 0.5 * (h + adjoint(h));
    double c1 = weyl_constant(h, box).quadrature;
    double c4 = weyl_constant(4.0 * h, box).quadrature;
    CHECK(c1 > 0.0);
    CHECK(std::abs(c4 - 4.0 * c1) < 1e-10 * c4);
  }

  TEST_CASE("fit of an exact power law") {
    std::vector<double> v(200);
    for (std::size_t l = 0; l < v.size(); ++l) v[l] = static_cast<double>(l) / 3.0;
    WeylFit f = weyl_fit(synthetic(v), 3.0, 2, 10, 150);
    CHECK(std::abs(f.exponent - 1.0) < 1e-12);
    CHECK(std::abs(f.prefactor - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(f.target_prefactor - 1.0 / 3.0) < 1e-15);
    CHECK(f.target_exponent == 1.0);
  }

  TEST_CASE("flat spectrum follows the Weyl law") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    AssemblyOptions o;
    o.multiplier_radius = 1;
    o.calculus_radius = 12;
    LaplaceBeltramiOperator op = assemble(TorusMatrix::identity(g, 2), Density::unit(g), LatticeBox(2, 12), o);
    SpectrumOptions so;
    so.count = 301;
    SpectrumResult s = spectrum(op, so);
    WeylFit fit = weyl_fit(s, kPi, 2, 50, 300);
    std::vector<double> oracle = lattice_eigenvalues(301);
    for (std::size_t l = 0; l < 301; ++l) CHECK(s.eigenvalues(static_cast<Eigen::Index>(l)) == doctest::Approx(oracle[l]).epsilon(1e-12));
    CHECK(std::abs(fit.exponent - slope(oracle, 50, 300)) < 1e-10);
    CHECK(std::abs(fit.exponent - 1.0) < 0.05);
    CHECK(std::abs(fit.ratio_mean - 1.0) < 0.15);
  }

  TEST_CASE("window must lie within the reliable eigenvalues") {
    std::vector<double> v(40);
    for (std::size_t l = 0; l < v.size(); ++l) v[l] = static_cast<double>(l);
    SpectrumResult s = synthetic(v);
    s.reliable = 30;
    CHECK_THROWS_AS(weyl_fit(s, kPi, 2, 10, 35), WindowOutOfRange);
    CHECK_THROWS_AS(weyl_fit(s, kPi, 2, 0, 20), WindowOutOfRange);
    CHECK_THROWS_AS(weyl_fit(s, kPi, 2, 20, 10), WindowOutOfRange);
    CHECK_NOTHROW(weyl_fit(s, kPi, 2, 1, 29));
  }
}
