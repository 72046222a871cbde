#pragma once

#include <stdexcept>
#include <string>

#include "vortexspec/common.hpp"

// Thin wrappers over LAPACK for the dense complex kernels (eigenvalues,
// Schur form, singular values).
namespace vortex::linalg {

struct LapackError : std::runtime_error {
  LapackError(const std::string& routine, int info);
  int info;
};

struct EigenPairs {
  VectorXcd values;
  MatrixXcd vectors;  // columns, unit 2-norm; empty unless requested
};

// Full eigendecomposition of a general complex matrix (zgeev).
EigenPairs eig(const MatrixXcd& A, bool want_vectors);

struct SchurForm {
  MatrixXcd T;  // upper triangular
  MatrixXcd Z;  // unitary, A = Z T Z^H
};

SchurForm schur(const MatrixXcd& A);

// Singular values in descending order (zgesdd).
VectorXd singular_values(const MatrixXcd& A);

inline double norm2(const MatrixXcd& A) { return singular_values(A)[0]; }

// Largest singular value by power iteration on A^H A.
double norm2_power(const MatrixXcd& A, int iterations = 20);

// Smallest singular value of (T - shift I) for upper triangular T, by
// inverse iteration with two triangular solves per step.
double smin_shifted_triangular(const MatrixXcd& T, cplx shift,
                               int max_iter = 60, double rtol = 1e-11);

// LU inverse (zgetrf/zgetri).
MatrixXcd inverse(const MatrixXcd& A);

// Inverse of an upper triangular matrix (ztrtri).
MatrixXcd triangular_inverse(const MatrixXcd& T);

}  // namespace vortex::linalg
