#include "gridinertia/la/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridinertia/error.hpp"
#include "gridinertia/tolerances.hpp"

namespace gridinertia::la {

namespace {

using cd = std::complex<double>;

// Largest-magnitude entry made real and positive (first such entry on ties).
template <typename V>
void canonical_phase(V& v) {
  Index arg = 0;
  double best = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > best * (1.0 + 1e-9)) {
      best = a;
      arg = i;
    }
  }
  if (best <= 0.0) return;
  if constexpr (std::is_same_v<typename V::Scalar, double>) {
    if (v(arg) < 0.0) v = -v;
  } else {
    const cd phase = std::conj(v(arg)) / std::abs(v(arg));
    v *= phase;
  }
}

void order_by_modulus(std::vector<EigenPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const EigenPair& a, const EigenPair& b) { return std::abs(a.value) < std::abs(b.value); });
  // Conjugates carry equal modulus up to rounding: order each such run by imaginary part.
  std::size_t i = 0;
  while (i < pairs.size()) {
    std::size_t j = i + 1;
    const double m = std::abs(pairs[i].value);
    while (j < pairs.size() && std::abs(pairs[j].value) - m <= 1e-10 * std::max(1.0, m)) ++j;
    std::stable_sort(pairs.begin() + static_cast<std::ptrdiff_t>(i), pairs.begin() + static_cast<std::ptrdiff_t>(j),
                     [](const EigenPair& a, const EigenPair& b) {
                       if (a.value.imag() != b.value.imag()) return a.value.imag() < b.value.imag();
                       return a.value.real() < b.value.real();
                     });
    i = j;
  }
}

}  // namespace

PencilEigen eig_sym_pencil(const Matrix& l, const Vector& n_diag) {
  const Index n = l.rows();
  if (l.cols() != n || n_diag.size() != n) throw InvariantError("eig_sym_pencil: dimension mismatch");
  for (Index i = 0; i < n; ++i)
    if (!(n_diag(i) > 0.0) || !std::isfinite(n_diag(i)))
      throw InvariantError("eig_sym_pencil: nonpositive N entry at index " + std::to_string(i));

  const Vector s = n_diag.cwiseSqrt().cwiseInverse();
  Matrix w = s.asDiagonal() * l * s.asDiagonal();
  w = 0.5 * (w + w.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  if (es.info() != Eigen::Success) throw ComputationError("symmetric eigensolver did not converge");

  PencilEigen out;
  out.values = es.eigenvalues();
  out.vectors = s.asDiagonal() * es.eigenvectors();
  for (Index c = 0; c < n; ++c) {
    Vector col = out.vectors.col(c);
    canonical_phase(col);
    out.vectors.col(c) = col;
  }
  return out;
}

double qep_residual(const Matrix& n, const Matrix& r, const Matrix& l, const EigenPair& p) {
  const cd lam = p.value;
  const Eigen::VectorXcd res = (lam * lam) * (n.cast<cd>() * p.vector) + lam * (r.cast<cd>() * p.vector) +
                               l.cast<cd>() * p.vector;
  return res.norm();
}

std::vector<EigenPair> eig_qep(const Matrix& n, const Matrix& r, const Matrix& l) {
  const Index dim = n.rows();
  if (n.cols() != dim || r.rows() != dim || r.cols() != dim || l.rows() != dim || l.cols() != dim)
    throw InvariantError("eig_qep: dimension mismatch");
  Eigen::LLT<Matrix> llt(0.5 * (n + n.transpose()));
  if (llt.info() != Eigen::Success || !n.isApprox(n.transpose(), 1e-12))
    throw InvariantError("eig_qep: N is not symmetric positive definite");

  // N = C C^T; y = C^T x turns the problem into lambda^2 y + lambda R' y + L' y = 0.
  const Matrix c = llt.matrixL();
  auto whiten = [&](const Matrix& a) {
    Matrix t = c.triangularView<Eigen::Lower>().solve(a);
    return Matrix(c.triangularView<Eigen::Lower>().solve(t.transpose()).transpose());
  };
  const Eigen::MatrixXcd ct = c.transpose().cast<cd>();
  auto unwhiten = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return ct.triangularView<Eigen::Upper>().solve(y);
  };
  const Matrix lw = whiten(l);

  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(2 * dim));

  if (r.isZero(0.0) && l.isApprox(l.transpose(), 1e-12)) {
    // Undamped: lambda = +-j sqrt(mu) exactly, also at the defective zero mode.
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (lw + lw.transpose()));
    if (es.info() != Eigen::Success) throw ComputationError("symmetric eigensolver did not converge");
    const double floor = tol::zero_mode * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (Index i = 0; i < dim; ++i) {
      // Roundoff can push the rigid-body root slightly negative.
      const double mu = std::abs(es.eigenvalues()(i)) <= floor ? 0.0 : es.eigenvalues()(i);
      Eigen::VectorXcd x = unwhiten(es.eigenvectors().col(i).cast<cd>());
      x.normalize();
      canonical_phase(x);
      if (mu >= 0.0) {
        const double w = std::sqrt(mu);
        pairs.push_back({cd(0.0, -w), x});
        pairs.push_back({cd(0.0, w), x});
      } else {
        const double a = std::sqrt(-mu);
        pairs.push_back({cd(-a, 0.0), x});
        pairs.push_back({cd(a, 0.0), x});
      }
    }
  } else {
    const Matrix rw = whiten(r);
    Matrix a = Matrix::Zero(2 * dim, 2 * dim);
    a.topRightCorner(dim, dim).setIdentity();
    a.bottomLeftCorner(dim, dim) = -lw;
    a.bottomRightCorner(dim, dim) = -rw;
    Eigen::EigenSolver<Matrix> es(a, true);
    if (es.info() != Eigen::Success) throw ComputationError("QEP eigensolver did not converge");
    for (Index i = 0; i < 2 * dim; ++i) {
      const cd lam = es.eigenvalues()(i);
      Eigen::VectorXcd z = es.eigenvectors().col(i);
      Eigen::VectorXcd y = z.head(dim);
      // Near lambda = 0 the head carries the mode; for large |lambda| the tail is better conditioned.
      if (std::abs(lam) > 1.0) y = z.tail(dim) / lam;
      Eigen::VectorXcd x = unwhiten(y);
      x.normalize();
      canonical_phase(x);
      pairs.push_back({lam, x});
    }
  }

  const double scale = std::max(l.norm(), 1.0);
  for (const auto& p : pairs) {
    const double res = qep_residual(n, r, l, p);
    if (!(res <= tol::qep_residual * scale))
      throw ComputationError("QEP residual " + std::to_string(res) + " exceeds tolerance");
  }
  order_by_modulus(pairs);
  return pairs;
}

}  // namespace gridinertia::la
