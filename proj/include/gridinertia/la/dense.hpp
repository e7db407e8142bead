#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace gridinertia::la {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Schur complement of b onto the kept indices, in the order given.
// Throws ComputationError when the eliminated block is singular.
Matrix kron_reduce(const Matrix& b, std::span<const Index> keep);

// Solves a x = rhs, throwing ComputationError on a singular a.
Matrix solve(const Matrix& a, const Matrix& rhs, const char* what);

}  // namespace gridinertia::la
