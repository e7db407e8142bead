#include <algorithm>
#include <string>

#include "gridinertia/error.hpp"
#include "gridinertia/la/dense.hpp"
#include "gridinertia/tolerances.hpp"

namespace gridinertia::la {

namespace {

Eigen::FullPivLU<Matrix> factor(const Matrix& a, const char* what) {
  Eigen::FullPivLU<Matrix> lu(a);
  lu.setThreshold(tol::kron_pivot);
  if (!lu.isInvertible()) throw ComputationError(std::string(what) + ": singular system");
  return lu;
}

}  // namespace

Matrix solve(const Matrix& a, const Matrix& rhs, const char* what) { return factor(a, what).solve(rhs); }

Matrix kron_reduce(const Matrix& b, std::span<const Index> keep) {
  const Index n = b.rows();
  if (b.cols() != n) throw InvariantError("kron_reduce: matrix is not square");
  std::vector<char> kept(static_cast<std::size_t>(n), 0);
  for (Index k : keep) {
    if (k < 0 || k >= n) throw InvariantError("kron_reduce: keep index out of range");
    if (kept[static_cast<std::size_t>(k)]) throw InvariantError("kron_reduce: repeated keep index");
    kept[static_cast<std::size_t>(k)] = 1;
  }
  std::vector<Index> drop;
  for (Index i = 0; i < n; ++i)
    if (!kept[static_cast<std::size_t>(i)]) drop.push_back(i);

  std::vector<Index> kv(keep.begin(), keep.end());
  Matrix b_kk = b(kv, kv);
  if (drop.empty()) return b_kk;

  const Matrix b_rr = b(drop, drop);
  const Matrix b_rk = b(drop, kv);
  const Matrix b_kr = b(kv, drop);
  Matrix reduced = b_kk - b_kr * factor(b_rr, "kron reduction").solve(b_rk);
  // Symmetric input stays symmetric; remove the rounding skew.
  if (b.isApprox(b.transpose(), 1e-14)) reduced = 0.5 * (reduced + reduced.transpose()).eval();
  return reduced;
}

}  // namespace gridinertia::la
