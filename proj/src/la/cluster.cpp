#include "gridinertia/la/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "gridinertia/error.hpp"

namespace gridinertia::la {

namespace {

bool row_less(const Matrix& x, Index a, Index b) {
  for (Index c = 0; c < x.cols(); ++c) {
    if (x(a, c) < x(b, c)) return true;
    if (x(a, c) > x(b, c)) return false;
  }
  return false;
}

std::vector<Index> lexicographic_order(const Matrix& x) {
  std::vector<Index> order(static_cast<std::size_t>(x.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return row_less(x, a, b); });
  return order;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct Run {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = std::numeric_limits<double>::infinity();
  std::vector<double> objective;
};

Matrix seed_plus_plus(const Matrix& x, int r, std::mt19937_64& rng) {
  const Index n = x.rows();
  Matrix c(r, x.cols());
  const Index first = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
  c.row(0) = x.row(first);
  Vector d2 = (x.rowwise() - c.row(0)).rowwise().squaredNorm();
  for (int k = 1; k < r; ++k) {
    const double total = d2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double u = uniform01(rng) * total;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        if (d2(i) <= 0.0) continue;
        u -= d2(i);
        if (u < 0.0) {
          pick = i;
          break;
        }
      }
      while (d2(pick) <= 0.0) --pick;
    }
    c.row(k) = x.row(pick);
    d2 = d2.cwiseMin((x.rowwise() - c.row(k)).rowwise().squaredNorm());
  }
  return c;
}

double assign(const Matrix& x, const Matrix& c, std::vector<int>& labels, Vector& dist) {
  double total = 0.0;
  for (Index i = 0; i < x.rows(); ++i) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (Index k = 0; k < c.rows(); ++k) {
      const double d = (x.row(i) - c.row(k)).squaredNorm();
      if (d < bd) {
        bd = d;
        best = static_cast<int>(k);
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    dist(i) = bd;
    total += bd;
  }
  return total;
}

Run lloyd(const Matrix& x, Matrix c, const KMeansOptions& opt) {
  const Index n = x.rows();
  const int r = static_cast<int>(c.rows());
  Run run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  Vector dist(n);
  double obj = assign(x, c, run.labels, dist);
  run.objective.push_back(obj);
  for (int it = 0; it < opt.max_iter; ++it) {
    Matrix sum = Matrix::Zero(r, x.cols());
    std::vector<Index> count(static_cast<std::size_t>(r), 0);
    for (Index i = 0; i < n; ++i) {
      sum.row(run.labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++count[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];
    }
    for (int k = 0; k < r; ++k) {
      if (count[static_cast<std::size_t>(k)] > 0) {
        c.row(k) = sum.row(k) / static_cast<double>(count[static_cast<std::size_t>(k)]);
      } else {
        // Empty cluster takes the point farthest from its centroid.
        Index far = 0;
        dist.maxCoeff(&far);
        c.row(k) = x.row(far);
        dist(far) = 0.0;
      }
    }
    const double next = assign(x, c, run.labels, dist);
    run.objective.push_back(next);
    const bool settled = obj - next <= opt.rel_change * std::max(obj, std::numeric_limits<double>::min());
    obj = next;
    if (settled) break;
  }
  run.centroids = std::move(c);
  run.inertia = obj;
  return run;
}

}  // namespace

std::size_t distinct_rows(const Matrix& points) {
  if (points.rows() == 0) return 0;
  auto order = lexicographic_order(points);
  std::size_t count = 1;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (row_less(points, order[i - 1], order[i])) ++count;
  return count;
}

KMeansResult kmeans(const Matrix& points, int r, std::uint64_t seed, const KMeansOptions& options) {
  if (r < 1) throw InvariantError("kmeans: cluster count must be at least 1");
  if (!points.allFinite()) throw InvariantError("kmeans: non-finite point coordinates");
  const auto distinct = distinct_rows(points);
  if (static_cast<std::size_t>(r) > distinct)
    throw InvariantError("kmeans: r = " + std::to_string(r) + " exceeds the " + std::to_string(distinct) +
                         " distinct points");

  const auto order = lexicographic_order(points);
  const Matrix x = points(order, Eigen::all);

  std::mt19937_64 rng(seed);
  Run best;
  for (int s = 0; s < std::max(1, options.restarts); ++s) {
    Run run = lloyd(x, seed_plus_plus(x, r, rng), options);
    if (run.inertia < best.inertia) best = std::move(run);
  }

  // Cluster ids by first appearance in sorted order, so labels do not depend on input order.
  std::vector<int> rename(static_cast<std::size_t>(r), -1);
  int next = 0;
  for (int l : best.labels)
    if (rename[static_cast<std::size_t>(l)] < 0) rename[static_cast<std::size_t>(l)] = next++;
  for (auto& v : rename)
    if (v < 0) v = next++;

  KMeansResult out;
  out.labels.assign(static_cast<std::size_t>(points.rows()), 0);
  for (std::size_t i = 0; i < order.size(); ++i)
    out.labels[static_cast<std::size_t>(order[i])] = rename[static_cast<std::size_t>(best.labels[i])];
  out.centroids.resize(r, points.cols());
  for (int k = 0; k < r; ++k) out.centroids.row(rename[static_cast<std::size_t>(k)]) = best.centroids.row(k);
  out.inertia = best.inertia;
  out.objective = std::move(best.objective);
  return out;
}

double silhouette(const Matrix& points, std::span<const int> labels) {
  const Index n = points.rows();
  if (static_cast<Index>(labels.size()) != n) throw InvariantError("silhouette: one label per point required");
  if (n == 0) throw InvariantError("silhouette: no points");
  const int r = *std::max_element(labels.begin(), labels.end()) + 1;
  if (*std::min_element(labels.begin(), labels.end()) < 0) throw InvariantError("silhouette: negative label");
  std::vector<Index> size(static_cast<std::size_t>(r), 0);
  for (int l : labels) ++size[static_cast<std::size_t>(l)];
  const auto nonempty = std::count_if(size.begin(), size.end(), [](Index s) { return s > 0; });
  if (nonempty < 2) throw InvariantError("silhouette: at least two clusters required");

  double total = 0.0;
  std::vector<double> mean(static_cast<std::size_t>(r));
  for (Index i = 0; i < n; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (size[static_cast<std::size_t>(own)] == 1) continue;
    std::fill(mean.begin(), mean.end(), 0.0);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      mean[static_cast<std::size_t>(labels[static_cast<std::size_t>(j)])] += (points.row(i) - points.row(j)).norm();
    }
    const double a = mean[static_cast<std::size_t>(own)] / static_cast<double>(size[static_cast<std::size_t>(own)] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int k = 0; k < r; ++k)
      if (k != own && size[static_cast<std::size_t>(k)] > 0)
        b = std::min(b, mean[static_cast<std::size_t>(k)] / static_cast<double>(size[static_cast<std::size_t>(k)]));
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

}  // namespace gridinertia::la
