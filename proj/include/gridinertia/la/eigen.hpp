#pragma once

#include <complex>
#include <vector>

#include "gridinertia/la/dense.hpp"

namespace gridinertia::la {

struct PencilEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns, N-orthonormal
};

// Solves L phi = mu N phi for symmetric L and positive diagonal N.
PencilEigen eig_sym_pencil(const Matrix& l, const Vector& n_diag);

struct EigenPair {
  std::complex<double> value;
  Eigen::VectorXcd vector;  // unit 2-norm
};

// All 2n solutions of (lambda^2 N + lambda R + L) x = 0, ordered by |lambda|.
std::vector<EigenPair> eig_qep(const Matrix& n, const Matrix& r, const Matrix& l);

double qep_residual(const Matrix& n, const Matrix& r, const Matrix& l, const EigenPair& pair);

}  // namespace gridinertia::la
