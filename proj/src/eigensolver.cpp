#include "nctorus/eigensolver.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>

#include "nctorus/error.hpp"

namespace nct {

HermitianEigen hermitian_eigensolve(const Eigen::MatrixXcd& a, bool want_vectors) {
  if (a.rows() != a.cols()) throw Error("eigensolve needs a square matrix");
  HermitianEigen out;
  const auto n = static_cast<lapack_int>(a.rows());
  out.values.resize(n);
  if (n == 0) return out;
  Eigen::MatrixXcd work = a;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'U', n, work.data(), n,
                                   out.values.data());
  if (info != 0) throw Error("zheevd failed with info " + std::to_string(info));
  if (want_vectors) out.vectors = std::move(work);
  return out;
}

HermitianEigen hermitian_generalized_eigensolve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                                               bool want_vectors) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw Error("generalized eigensolve needs square matrices of equal size");
  }
  HermitianEigen out;
  const auto n = static_cast<lapack_int>(a.rows());
  out.values.resize(n);
  if (n == 0) return out;
  Eigen::MatrixXcd wa = a;
  Eigen::MatrixXcd wb = b;
  lapack_int info = LAPACKE_zhegvd(LAPACK_COL_MAJOR, 1, want_vectors ? 'V' : 'N', 'U', n, wa.data(), n,
                                   wb.data(), n, out.values.data());
  if (info != 0) throw Error("zhegvd failed with info " + std::to_string(info));
  if (want_vectors) out.vectors = std::move(wa);
  return out;
}

std::optional<Eigen::MatrixXcd> hermitian_positive_solve(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& rhs) {
  if (a.rows() != a.cols() || rhs.rows() != a.rows()) throw Error("solve dimension mismatch");
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return rhs;
  Eigen::MatrixXcd wa = a;
  Eigen::MatrixXcd x = rhs;
  lapack_int info = LAPACKE_zposv(LAPACK_COL_MAJOR, 'U', n, static_cast<lapack_int>(x.cols()), wa.data(), n,
                                  x.data(), n);
  if (info > 0) return std::nullopt;
  if (info < 0) throw Error("zposv failed with info " + std::to_string(info));
  return x;
}

bool positive_definite_above(const Eigen::MatrixXcd& a, double shift) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return true;
  Eigen::MatrixXcd wa = a;
  wa.diagonal().array() -= shift;
  lapack_int info = LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'U', n, wa.data(), n);
  if (info < 0) throw Error("zpotrf failed with info " + std::to_string(info));
  return info == 0;
}

}  // namespace nct
