#include <cmath>
#include <limits>

#include "gridinertia/error.hpp"
#include "gridinertia/la/eigen.hpp"
#include "gridinertia/partition/partition.hpp"

namespace gridinertia::partition {

namespace {

using cd = std::complex<double>;

void unit_column_canonical_sign(Vector& v) {
  const double norm = v.norm();
  if (norm > 0.0) v /= norm;
  la::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

// |x_i| signed by the real part after the global phase that makes sum x_i^2 real.
Vector signed_modulus(const Eigen::VectorXcd& x) {
  const cd s = x.cwiseProduct(x).sum();
  const double alpha = std::abs(s) > 0.0 ? 0.5 * std::arg(s) : 0.0;
  const Eigen::VectorXcd y = x * std::polar(1.0, -alpha);
  Vector out(x.size());
  for (la::Index i = 0; i < x.size(); ++i) out(i) = std::abs(x(i)) * (y(i).real() < 0.0 ? -1.0 : 1.0);
  return out;
}

int select_k(const std::vector<double>& mag, int max_modes, std::vector<double>& gamma) {
  const int n = static_cast<int>(mag.size());
  const double scale = mag.empty() ? 0.0 : std::max(mag.back(), 1.0);
  const int last = std::min(max_modes + 1, n - 1);
  int best = 1;
  double best_gap = -1.0;
  for (int i = 2; i <= last; ++i) {
    const double lo = mag[static_cast<std::size_t>(i - 1)];
    if (lo <= tol::zero_mode * scale) {
      gamma.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double g = (mag[static_cast<std::size_t>(i)] - lo) / lo;
    gamma.push_back(g);
    if (g > best_gap) {
      best_gap = g;
      best = i;
    }
  }
  return std::min(best, n - 1);
}

}  // namespace

SpectralEmbedding spectral_modes(const model::Snapshot& snapshot, const inertia::InertiaProfile& profile,
                                 bool include_damping, const EmbeddingOptions& options) {
  const auto n = static_cast<la::Index>(snapshot.bus_count());
  if (profile.h.size() != n) throw InvariantError("inertia profile does not match the snapshot");
  for (la::Index i = 0; i < n; ++i)
    if (!profile.present[static_cast<std::size_t>(i)])
      throw ComputationError("bus " + model::to_string(profile.bus_ids[static_cast<std::size_t>(i)]) +
                             " has no nodal inertia; every bus must be reachable from an inertial source");
  if (n < 3) throw InvariantError("spectral embedding needs at least three buses");

  const auto lap = build_laplacian(snapshot);
  SpectralEmbedding out;
  out.mode = include_damping ? Mode::damped_qep : Mode::undamped_pencil;
  std::vector<Vector> modes;

  if (!include_damping) {
    const auto eig = la::eig_sym_pencil(lap.l, profile.h);
    for (la::Index i = 0; i < n; ++i) {
      out.magnitudes.push_back(std::sqrt(std::max(eig.values(i), 0.0)));
      modes.push_back(eig.vectors.col(i));
      out.eigenvalues.push_back(cd(0.0, out.magnitudes.back()));
    }
  } else {
    const Matrix nm = profile.h.asDiagonal();
    const auto pairs = la::eig_qep(nm, profile.r, lap.l);
    // Rigid-body pair: the zero mode and the real decay of the common mode,
    // whose vector is the one closest to uniform.
    auto is_real = [](const la::EigenPair& p) {
      return std::abs(p.value.imag()) <= 1e-10 * std::max(1.0, std::abs(p.value));
    };
    const Eigen::VectorXcd uniform = Eigen::VectorXcd::Constant(n, cd(1.0 / std::sqrt(double(n)), 0.0));
    std::size_t decay = 1;
    double overlap = -1.0;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      if (!is_real(pairs[i])) continue;
      const double o = std::abs(uniform.dot(pairs[i].vector));
      if (o > overlap) {
        overlap = o;
        decay = i;
      }
    }
    out.magnitudes.push_back(std::abs(pairs[0].value));
    modes.push_back(signed_modulus(pairs[0].vector));
    out.eigenvalues.push_back(pairs[0].value);
    for (std::size_t i = 1; i < pairs.size(); ++i) {
      if (i == decay) continue;
      const auto& p = pairs[i];
      if (!is_real(p) && p.value.imag() < 0.0) continue;
      out.magnitudes.push_back(std::abs(p.value));
      modes.push_back(signed_modulus(p.vector));
      out.eigenvalues.push_back(p.value);
    }
  }

  out.k = select_k(out.magnitudes, options.max_modes, out.eigengap);
  out.k = std::min<int>(out.k, static_cast<int>(modes.size()) - 1);
  out.rows.resize(n, out.k);
  for (int c = 0; c < out.k; ++c) {
    Vector v = modes[static_cast<std::size_t>(c + 1)];
    unit_column_canonical_sign(v);
    out.rows.col(c) = v;
  }
  out.eigenvalues = std::vector<cd>(out.eigenvalues.begin() + 1, out.eigenvalues.begin() + 1 + out.k);
  if (options.row_normalize) {
    for (la::Index i = 0; i < n; ++i) {
      const double norm = out.rows.row(i).norm();
      if (norm > 0.0) out.rows.row(i) /= norm;
    }
  }
  return out;
}

}  // namespace gridinertia::partition
