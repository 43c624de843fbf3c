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

AssemblyOptions options(int m, int calc) {
  AssemblyOptions o;
  o.multiplier_radius = m;
  o.calculus_radius = calc;
  return o;
}

struct RandomPair {
  TorusGeometry geometry;
  TorusMatrix h;
  AlgebraElement nu;
};

RandomPair random_pair(Rng& rng) {
  TorusGeometry g = random_plane(rng);
  TorusMatrix h = random_positive_matrix(g, 2, 1, 0.15, 1.0, rng);
  AlgebraElement nu = random_positive(g, 1, 0.15, 1.0, rng);
  return {g, h, nu};
}

LaplaceBeltramiOperator assemble_pair(const RandomPair& p, int n, int m, int calc) {
  LatticeBox cbox(2, calc);
  return assemble(p.h, Density::from_element(p.nu, cbox), LatticeBox(2, n), options(m, calc));
}

Eigen::VectorXd squared_norms(const LatticeBox& box) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(box.size()));
  for (std::size_t r = 0; r < box.size(); ++r) {
    auto q = box.mode(r);
    double s = 0.0;
    for (int x : q) s += static_cast<double>(x) * x;
    d(static_cast<Eigen::Index>(r)) = s;
  }
  return d;
}

}  // namespace

TEST_SUITE("laplacian") {
  TEST_CASE("flat Laplacian is diagonal with |k|^2") {
    for (double t : {0.0, 1.0 / std::sqrt(2.0)}) {
      TorusGeometry g = TorusGeometry::plane(t);
      LatticeBox box(2, 6);
      LaplaceBeltramiOperator op = assemble(TorusMatrix::identity(g, 2), Density::unit(g), box, options(1, 6));
      Eigen::MatrixXcd expected = squared_norms(box).cast<Complex>().asDiagonal();
      CHECK((op.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
      CHECK(op.asymmetry() < 1e-14);
      CHECK(op.apply(AlgebraElement::identity(g)).is_zero(1e-15));
    }
  }

  TEST_CASE("constants are annihilated") {
    Rng rng(61);
    RandomPair p = random_pair(rng);
    LaplaceBeltramiOperator op = assemble_pair(p, 8, 2, 12);
    CHECK(op.apply(AlgebraElement::identity(p.geometry)).is_zero(1e-12));
  }

  TEST_CASE("conformally flat metric in two dimensions") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox calc(2, 12);
    LatticeBox box(2, 8);
    AlgebraElement b = bump(g, 0.15, 0.1);
    AlgebraElement k = functional_calculus(b, ScalarFunction::exp(), calc);
    RiemannianMetric ct = metric_conformal(metric_flat(g, calc), k);
    LaplaceBeltramiOperator op = assemble_riemannian(ct, box, options(2, 12));
    // M(Delta_g) = C(k^{-2}) M(Delta_flat) with k^{-2} = exp(-2b) truncated like the multipliers.
    AlgebraElement k_m2 = functional_calculus(-2.0 * b, ScalarFunction::exp(), calc).resized(2);
    Eigen::MatrixXcd expected = compress_left_multiplication(k_m2, box).matrix * squared_norms(box).cast<Complex>().asDiagonal();
    CHECK((op.matrix() - expected).cwiseAbs().maxCoeff() < 1e-8);
    REQUIRE(op.commuted_form_residual.has_value());
    CHECK(*op.commuted_form_residual < 1e-9);
  }

  TEST_CASE("product metric with commuting factors matches the expanded formula") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox calc(2, 12);
    AlgebraElement a = bump(g, 0.3, 0.2);
    AlgebraElement k1 = functional_calculus(0.4 * a, ScalarFunction::exp(), calc);
    AlgebraElement k2 = functional_calculus(-0.3 * a, ScalarFunction::exp(), calc);
    RiemannianMetric m = RiemannianMetric::validate(TorusMatrix::diagonal({multiply(k1, k1), multiply(k2, k2)}), calc);
    FormMetric fm = FormMetric::from_metric(m);
    // Delta u = -(k1 k2)^{-1} (d1(k2 k1^{-1} d1 u) + d2(k1 k2^{-1} d2 u)), each factor an exponential of a.
    AlgebraElement w = functional_calculus(-0.1 * a, ScalarFunction::exp(), calc);
    AlgebraElement r12 = functional_calculus(-0.7 * a, ScalarFunction::exp(), calc);
    AlgebraElement r21 = functional_calculus(0.7 * a, ScalarFunction::exp(), calc);
    Rng rng(62);
    for (int t = 0; t < 3; ++t) {
      AlgebraElement u = random_element(g, 2, 1.0, rng);
      AlgebraElement inner = derivation(multiply(r12, derivation(u, 0)), 0) + derivation(multiply(r21, derivation(u, 1)), 1);
      AlgebraElement expected = -1.0 * multiply(w, inner);
      CHECK(max_abs_diff_within(apply_laplacian(u, fm), expected, 4) < 1e-8);
    }
  }

  TEST_CASE("Green identity") {
    Rng rng(63);
    for (int t = 0; t < 3; ++t) {
      RandomPair p = random_pair(rng);
      LaplaceBeltramiOperator op = assemble_pair(p, 10, 2, 12);
      std::vector<AlgebraElement> us, vs;
      for (int i = 0; i < 3; ++i) {
        us.push_back(random_element(p.geometry, 3, 1.0, rng));
        vs.push_back(random_element(p.geometry, 3, 1.0, rng));
      }
      CHECK(green_identity_residual(op, us, vs) < 1e-9);
    }
  }

  TEST_CASE("principal symbol is invertible") {
    Rng rng(64);
    RandomPair p = random_pair(rng);
    PrincipalSymbolReport r = principal_symbol_check(assemble_pair(p, 8, 2, 12));
    CHECK(r.invertible);
    CHECK(r.directions > 0);
    CHECK(r.min_eigenvalue > 0.0);
    CHECK(r.min_eigenvalue <= r.max_eigenvalue);
    TorusGeometry g = TorusGeometry::plane(0.2);
    PrincipalSymbolReport f =
        principal_symbol_check(assemble(TorusMatrix::identity(g, 2), Density::unit(g), LatticeBox(2, 4), options(1, 4)));
    CHECK(std::abs(f.min_eigenvalue - 1.0) < 1e-12);
    CHECK(std::abs(f.max_eigenvalue - 1.0) < 1e-12);
  }

  TEST_CASE("asymmetry of the conjugated matrix decreases with the box") {
    Rng rng(65);
    for (int t = 0; t < 2; ++t) {
      RandomPair p = random_pair(rng);
      LaplaceBeltramiOperator op = assemble_pair(p, 6, 1, 14);
      double previous = op.asymmetry();
      for (int n : {8, 10, 12}) {
        double a = op.reassembled(n).asymmetry();
        CHECK(a < previous);
        previous = a;
      }
    }
  }

  TEST_CASE("spectrum of random pairs") {
    Rng rng(66);
    for (int t = 0; t < 2; ++t) {
      RandomPair p = random_pair(rng);
      LaplaceBeltramiOperator op = assemble_pair(p, 10, 2, 12);
      SpectrumOptions so;
      so.count = 50;
      so.want_vectors = true;
      so.cross_check = true;
      SpectrumResult s = spectrum(op, so);
      CHECK(s.reliable >= 50);
      CHECK(s.resolved > 0);
      CHECK(s.resolved <= s.reliable);
      CHECK(s.kernel_dimension() == 1);
      CHECK(s.min_reliable() >= -1e-8);
      CHECK(std::abs(s.eigenvalues(0)) < 1e-8);
      CHECK(s.eigenvalues(1) > 1e-2);
      CHECK(s.gram_residual < 1e-8);
      REQUIRE(s.cross_check_residual.has_value());
      CHECK(*s.cross_check_residual < 1e-6);
      CHECK(s.eigenvectors.cols() == static_cast<Eigen::Index>(s.reliable));
      for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues(i) >= s.eigenvalues(i - 1));
    }
  }

  TEST_CASE("eigenvectors concentrate away from the box boundary") {
    Rng rng(67);
    RandomPair p = random_pair(rng);
    LaplaceBeltramiOperator op = assemble_pair(p, 8, 2, 14);
    double previous = 1.0;
    double kernel = 1.0;
    for (int n : {8, 10, 12}) {
      SpectrumOptions so;
      so.strict = false;
      so.want_vectors = true;
      SpectrumResult s = spectrum(op.reassembled(n), so);
      double band = s.shell_decay_below(4.0);
      CHECK(band < previous);
      previous = band;
      kernel = s.shell_decay[0];
    }
    CHECK(kernel < 1e-6);
    CHECK(previous < 1e-4);
  }

  TEST_CASE("flat spectrum and multiplicities") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LaplaceBeltramiOperator op = assemble(TorusMatrix::identity(g, 2), Density::unit(g), LatticeBox(2, 8), options(2, 8));
    SpectrumOptions so;
    so.count = 21;
    SpectrumResult s = spectrum(op, so);
    // |k|^2 for the 21 lowest modes: 0, 1 x4, 2 x4, 4 x4, 5 x8.
    const double expected[] = {0, 1, 1, 1, 1, 2, 2, 2, 2, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5, 5};
    for (int i = 0; i < 21; ++i) CHECK(std::abs(s.eigenvalues(i) - expected[i]) < 1e-12);
    CHECK(s.group[1] == s.group[4]);
    CHECK(s.group[4] != s.group[5]);
    CHECK(s.group[13] == s.group[20]);
  }

  TEST_CASE("multiplicity groups") {
    Eigen::VectorXd v(6);
    v << 0.0, 1.0, 1.0 + 1e-9, 1.0, 2.0, 2.5;
    std::vector<int> grp = multiplicity_groups(v, 1e-6);
    CHECK(grp == std::vector<int>{0, 1, 1, 1, 2, 3});
  }

  TEST_CASE("spectrum and assembly preconditions") {
    TorusGeometry g = TorusGeometry::plane(0.3);
    CHECK_THROWS_AS(assemble(TorusMatrix::identity(g, 2), Density::unit(g), LatticeBox(2, 8), options(3, 8)), BoxTooSmall);
    Rng rng(68);
    RandomPair p = random_pair(rng);
    LaplaceBeltramiOperator op = assemble_pair(p, 8, 2, 12);
    SpectrumOptions so;
    so.count = op.box().size();
    CHECK_THROWS_AS(spectrum(op, so), UnstableSpectrum);
    so.strict = false;
    SpectrumResult s = spectrum(op, so);
    CHECK(s.reliable < op.box().size());
  }

  TEST_CASE("conformal covariance with a unit factor") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 10);
    RiemannianMetric q = metric_functional(bump(g, 0.3, 0.2), quadratic_family(), box);
    ConformalCovarianceReport r = conformal_covariance_check(q, AlgebraElement::identity(g));
    CHECK(r.law_residual < 1e-12);
    CHECK(r.scaling_residual < 1e-12);
    CHECK(r.probes == 49);
  }

  TEST_CASE("conformal covariance in two dimensions") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 12);
    AlgebraElement a = bump(g, 0.3, 0.2);
    RiemannianMetric q = metric_functional(a, quadratic_family(), box);
    AlgebraElement k = functional_calculus(0.5 * a, ScalarFunction::exp(), box);
    ConformalCheckOptions co;
    co.probe_radius = 4;
    ConformalCovarianceReport r = conformal_covariance_check(q, k, co);
    CHECK(r.commutation_residual < 1e-9);
    CHECK(r.law_residual < 1e-8);
    CHECK(r.scaling_residual < 1e-8);
  }

  TEST_CASE("conformal covariance in three dimensions needs the gradient term") {
    TorusGeometry g(3, {0.0, 0.3, 0.0, -0.3, 0.0, 0.5, 0.0, -0.5, 0.0});
    LatticeBox box(3, 8);
    AlgebraElement b = 0.1 * (V(g, {1, 0, 0}) + V(g, {-1, 0, 0})) + 0.1 * (V(g, {0, 0, 1}) + V(g, {0, 0, -1}));
    // theta_13 = 0, so b generates a commutative subalgebra; the flat metric commutes with anything.
    AlgebraElement k = functional_calculus(b, ScalarFunction::exp(), box);
    ConformalCheckOptions co;
    co.probe_radius = 2;
    ConformalCovarianceReport r = conformal_covariance_check(metric_flat(g, box), k, co);
    CHECK(r.law_residual < 1e-8);
    CHECK(r.scaling_residual > 1e-3);
  }

  TEST_CASE("conformal covariance rejects a non-commuting factor") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox box(2, 8);
    RiemannianMetric q = metric_functional(bump(g, 0.3, 0.2), quadratic_family(), box);
    AlgebraElement k = functional_calculus(0.2 * (V(g, {1, 1}) + V(g, {-1, -1})), ScalarFunction::exp(), box);
    CHECK_THROWS_AS(conformal_covariance_check(q, k), HypothesisViolated);
  }

  TEST_CASE("conformally deformed flat operator shares the low spectrum") {
    TorusGeometry g = TorusGeometry::plane(1.0 / std::sqrt(2.0));
    LatticeBox calc(2, 14);
    LatticeBox box(2, 12);
    AlgebraElement k = functional_calculus(bump(g, 0.15, 0.1), ScalarFunction::exp(), calc);
    Eigen::MatrixXcd t = conformally_deformed_flat(k, box);
    CHECK((t - t.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t, Eigen::EigenvaluesOnly);
    LaplaceBeltramiOperator op = assemble_riemannian(metric_conformal(metric_flat(g, calc), k), box, options(3, 14));
    SpectrumOptions so;
    so.count = 20;
    SpectrumResult s = spectrum(op, so);
    for (int i = 1; i < 20; ++i) {
      CHECK(std::abs(es.eigenvalues()(i) - s.eigenvalues(i)) < 1e-3 * s.eigenvalues(i));
    }
    CHECK(std::abs(es.eigenvalues()(0)) < 1e-10);
  }
}
