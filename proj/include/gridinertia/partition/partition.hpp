#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/la/dense.hpp"
#include "gridinertia/model/snapshot.hpp"
#include "gridinertia/tolerances.hpp"

namespace gridinertia::partition {

using la::Matrix;
using la::Vector;

struct NetworkLaplacian {
  Matrix l;
};

// L_ij = -V_i V_j b_ij cos(theta_i - theta_j), zero row sums.
NetworkLaplacian build_laplacian(const model::Snapshot& snapshot);

enum class Mode { undamped_pencil, damped_qep };
std::string_view to_string(Mode mode);

struct EmbeddingOptions {
  int max_modes = tol::eigengap_max_modes;
  bool row_normalize = false;
};

struct SpectralEmbedding {
  Mode mode = Mode::undamped_pencil;
  int k = 0;
  Matrix rows;                                   // n_bus x k
  std::vector<std::complex<double>> eigenvalues;  // the k modes used
  std::vector<double> magnitudes;                // |lambda| ascending, trivial mode first
  std::vector<double> eigengap;                  // gamma_i for i = 2.., index 0 is gamma_2
};

SpectralEmbedding spectral_modes(const model::Snapshot& snapshot, const inertia::InertiaProfile& profile,
                                 bool include_damping, const EmbeddingOptions& options = {});

// Weighted undirected bus graph, used for connectivity repair.
struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
};

std::vector<Edge> susceptance_edges(const model::Snapshot& snapshot);

struct ConnectivityRepair {
  std::vector<int> labels;
  int moved_fragments = 0;
  int new_regions = 0;
};

// Moves every fragment other than the largest of each region to the adjacent
// region sharing the most boundary susceptance.
ConnectivityRepair repair_connectivity(std::vector<int> labels, std::size_t n_nodes, const std::vector<Edge>& edges);

struct PartitionOptions {
  int r_min = 2;
  int r_max = 10;
  std::uint64_t seed = 42;
  bool include_damping = false;
  EmbeddingOptions embedding;
};

struct SilhouetteEntry {
  int r = 0;
  double score = 0.0;
};

struct PartitionResult {
  std::vector<model::BusId> bus_ids;
  std::vector<int> labels;  // per bus, regions numbered 0.. by first member in bus order
  int r = 0;
  int k = 0;
  Mode mode = Mode::undamped_pencil;
  std::vector<SilhouetteEntry> silhouette_by_r;
  double silhouette = 0.0;
  int clustered_r = 0;  // r selected before connectivity repair
  int moved_fragments = 0;
  SpectralEmbedding embedding;

  std::vector<std::size_t> members(int region) const;
  int region_of(model::BusId id) const;
};

// Sweeps r over the embedding rows and keeps the best silhouette (ties to the smaller r).
PartitionResult cluster_embedding(const SpectralEmbedding& embedding, std::vector<model::BusId> bus_ids,
                                  const std::vector<Edge>& edges, const PartitionOptions& options);

PartitionResult partition(const model::Snapshot& snapshot, const inertia::InertiaProfile& profile,
                          const PartitionOptions& options = {});

std::string partition_csv(const PartitionResult& result);
std::string partition_dot(const PartitionResult& result, const model::Snapshot& snapshot);

}  // namespace gridinertia::partition
