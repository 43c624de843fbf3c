#pragma once

#include <Eigen/Dense>
#include <optional>

namespace nct {

struct HermitianEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns; empty when not requested
};

/// Dense Hermitian eigensolve (upper triangle is read).
HermitianEigen hermitian_eigensolve(const Eigen::MatrixXcd& a, bool want_vectors = true);

/// Generalized problem a x = lambda b x with b Hermitian positive definite.
HermitianEigen hermitian_generalized_eigensolve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                               bool want_vectors = false);

/// Solves a x = rhs for Hermitian positive-definite a; nullopt when the Cholesky factorisation fails.
std::optional<Eigen::MatrixXcd> hermitian_positive_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rhs);

/// True when a - shift * I admits a Cholesky factorisation.
bool positive_definite_above(const Eigen::MatrixXcd& a, double shift);

}  // namespace nct
