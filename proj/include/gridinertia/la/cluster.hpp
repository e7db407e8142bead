#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridinertia/la/dense.hpp"
#include "gridinertia/tolerances.hpp"

namespace gridinertia::la {

struct KMeansOptions {
  int restarts = tol::kmeans_restarts;
  int max_iter = tol::kmeans_max_iter;
  double rel_change = tol::kmeans_rel_change;
};

struct KMeansResult {
  std::vector<int> labels;           // one per input row
  Matrix centroids;                  // r x dim
  double inertia = 0.0;              // within-cluster sum of squares
  std::vector<double> objective;     // per Lloyd iteration of the winning restart
};

// Rows of points are observations.  The result does not depend on row order.
KMeansResult kmeans(const Matrix& points, int r, std::uint64_t seed, const KMeansOptions& options = {});

// Mean silhouette coefficient; singleton clusters contribute 0.
double silhouette(const Matrix& points, std::span<const int> labels);

std::size_t distinct_rows(const Matrix& points);

}  // namespace gridinertia::la
