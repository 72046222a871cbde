#include "vortexspec/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace vortex::linalg {

LapackError::LapackError(const std::string& routine, int info_)
    : std::runtime_error(routine + " failed with info=" + std::to_string(info_)),
      info(info_) {}

namespace {

lapack_complex_double* lp(cplx* p) {
  return reinterpret_cast<lapack_complex_double*>(p);
}

}  // namespace

EigenPairs eig(const MatrixXcd& A, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  MatrixXcd a = A;
  EigenPairs out;
  out.values.resize(n);
  if (want_vectors) out.vectors.resize(n, n);
  cplx dummy;
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', n, lp(a.data()), n,
      lp(out.values.data()), lp(&dummy), 1,
      want_vectors ? lp(out.vectors.data()) : lp(&dummy), want_vectors ? n : 1);
  if (info != 0) throw LapackError("zgeev", info);
  return out;
}

SchurForm schur(const MatrixXcd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  SchurForm s;
  s.T = A;
  s.Z.resize(n, n);
  VectorXcd w(n);
  lapack_int sdim = 0;
  const lapack_int info =
      LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, lp(s.T.data()), n,
                    &sdim, lp(w.data()), lp(s.Z.data()), n);
  if (info != 0) throw LapackError("zgees", info);
  s.T.triangularView<Eigen::StrictlyLower>().setZero();
  return s;
}

VectorXd singular_values(const MatrixXcd& A) {
  const lapack_int m = static_cast<lapack_int>(A.rows());
  const lapack_int n = static_cast<lapack_int>(A.cols());
  MatrixXcd a = A;
  VectorXd s(std::min(m, n));
  cplx dummy;
  const lapack_int info =
      LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(a.data()), m, s.data(),
                     lp(&dummy), 1, lp(&dummy), 1);
  if (info != 0) throw LapackError("zgesdd", info);
  return s;
}

double norm2_power(const MatrixXcd& A, int iterations) {
  VectorXcd x = VectorXcd::Ones(A.cols()) / std::sqrt(double(A.cols()));
  double s = 0.0;
  for (int it = 0; it < iterations; ++it) {
    const VectorXcd y = A.adjoint() * (A * x);
    const double ny = y.norm();
    if (ny == 0.0) return 0.0;
    s = std::sqrt(ny);
    x = y / ny;
  }
  return s;
}

double smin_shifted_triangular(const MatrixXcd& T, cplx shift, int max_iter,
                               double rtol) {
  const Index n = T.rows();
  MatrixXcd M = T;
  M.diagonal().array() -= shift;
  const auto U = M.triangularView<Eigen::Upper>();
  VectorXcd x(n);
  // deterministic, non-degenerate start
  for (Index i = 0; i < n; ++i)
    x[i] = cplx(std::cos(0.7 * i + 0.3), std::sin(1.3 * i + 0.1));
  x.normalize();
  double s = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    VectorXcd y = U.solve(x);
    y = U.adjoint().solve(y);
    const double ny = y.norm();
    if (!std::isfinite(ny)) return 0.0;
    const double s_new = 1.0 / std::sqrt(ny);
    x = y / ny;
    if (s > 0.0 && std::abs(s_new - s) <= rtol * s_new) return s_new;
    s = s_new;
  }
  return s;
}

MatrixXcd inverse(const MatrixXcd& A) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  MatrixXcd B = A;
  std::vector<lapack_int> piv(n);
  lapack_int info = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, lp(B.data()), n, piv.data());
  if (info != 0) throw LapackError("zgetrf", info);
  info = LAPACKE_zgetri(LAPACK_COL_MAJOR, n, lp(B.data()), n, piv.data());
  if (info != 0) throw LapackError("zgetri", info);
  return B;
}

MatrixXcd triangular_inverse(const MatrixXcd& T) {
  const lapack_int n = static_cast<lapack_int>(T.rows());
  MatrixXcd B = T.triangularView<Eigen::Upper>();
  const lapack_int info = LAPACKE_ztrtri(LAPACK_COL_MAJOR, 'U', 'N', n, lp(B.data()), n);
  if (info != 0) throw LapackError("ztrtri", info);
  return B;
}

}  // namespace vortex::linalg
