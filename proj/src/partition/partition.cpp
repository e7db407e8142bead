#include <algorithm>
#include <numeric>
#include <sstream>

#include "gridinertia/error.hpp"
#include "gridinertia/la/cluster.hpp"
#include "gridinertia/parallel.hpp"
#include "gridinertia/partition/partition.hpp"

namespace gridinertia::partition {

namespace {

std::vector<int> relabel_by_first_member(std::vector<int> labels) {
  std::vector<int> map;
  for (auto& l : labels) {
    if (l >= static_cast<int>(map.size())) map.resize(static_cast<std::size_t>(l) + 1, -1);
    if (map[static_cast<std::size_t>(l)] < 0)
      map[static_cast<std::size_t>(l)] = *std::max_element(map.begin(), map.end()) + 1;
    l = map[static_cast<std::size_t>(l)];
  }
  return labels;
}

// Connected pieces of one region, each sorted ascending.
std::vector<std::vector<std::size_t>> fragments(const std::vector<int>& labels, int region,
                                                const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<char> seen(labels.size(), 0);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] != region || seen[s]) continue;
    std::vector<std::size_t> piece{s}, stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u]) {
        if (labels[v] == region && !seen[v]) {
          seen[v] = 1;
          piece.push_back(v);
          stack.push_back(v);
        }
      }
    }
    std::sort(piece.begin(), piece.end());
    out.push_back(std::move(piece));
  }
  return out;
}

}  // namespace

std::vector<std::size_t> PartitionResult::members(int region) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == region) out.push_back(i);
  return out;
}

int PartitionResult::region_of(model::BusId id) const {
  for (std::size_t i = 0; i < bus_ids.size(); ++i)
    if (bus_ids[i] == id) return labels[i];
  throw ReferenceError("bus " + model::to_string(id) + " is not part of the partition");
}

ConnectivityRepair repair_connectivity(std::vector<int> labels, std::size_t n_nodes, const std::vector<Edge>& edges) {
  if (labels.size() != n_nodes) throw InvariantError("repair_connectivity: one label per node required");
  std::vector<std::vector<std::size_t>> adj(n_nodes);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  ConnectivityRepair out;
  bool changed = true;
  while (changed) {
    changed = false;
    const int regions = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    for (int reg = 0; reg < regions && !changed; ++reg) {
      auto pieces = fragments(labels, reg, adj);
      if (pieces.size() < 2) continue;
      // Largest piece stays; ties keep the one with the lowest node.
      std::size_t keep = 0;
      for (std::size_t p = 1; p < pieces.size(); ++p)
        if (pieces[p].size() > pieces[keep].size()) keep = p;
      const std::size_t move = keep == 0 ? 1 : 0;
      std::vector<double> boundary(static_cast<std::size_t>(regions), 0.0);
      std::vector<char> in_piece(n_nodes, 0);
      for (auto u : pieces[move]) in_piece[u] = 1;
      for (const auto& e : edges) {
        if (in_piece[e.a] == in_piece[e.b]) continue;
        const auto outside = in_piece[e.a] ? e.b : e.a;
        if (labels[outside] != reg) boundary[static_cast<std::size_t>(labels[outside])] += e.weight;
      }
      int target = -1;
      for (int q = 0; q < regions; ++q)
        if (boundary[static_cast<std::size_t>(q)] > 0.0 &&
            (target < 0 || boundary[static_cast<std::size_t>(q)] > boundary[static_cast<std::size_t>(target)]))
          target = q;
      if (target < 0) {
        target = regions;
        ++out.new_regions;
      }
      for (auto u : pieces[move]) labels[u] = target;
      ++out.moved_fragments;
      changed = true;
    }
  }
  out.labels = relabel_by_first_member(std::move(labels));
  return out;
}

PartitionResult cluster_embedding(const SpectralEmbedding& embedding, std::vector<model::BusId> bus_ids,
                                  const std::vector<Edge>& edges, const PartitionOptions& options) {
  const auto& x = embedding.rows;
  const auto n = static_cast<int>(x.rows());
  if (options.r_min < 2 || options.r_max < options.r_min || options.r_max > n - 1)
    throw InvariantError("r range [" + std::to_string(options.r_min) + ", " + std::to_string(options.r_max) +
                         "] must lie within [2, " + std::to_string(n - 1) + "]");
  const auto distinct = static_cast<int>(la::distinct_rows(x));
  if (distinct < 2) throw ComputationError("degenerate embedding: all rows are equal");
  const int r_hi = std::min(options.r_max, distinct);
  if (r_hi < options.r_min)
    throw ComputationError("embedding has only " + std::to_string(distinct) + " distinct rows");

  const auto count = static_cast<std::size_t>(r_hi - options.r_min + 1);
  std::vector<la::KMeansResult> fits(count);
  std::vector<double> score(count);
  parallel_for(count, [&](std::size_t i) {
    const int r = options.r_min + static_cast<int>(i);
    fits[i] = la::kmeans(x, r, options.seed);
    score[i] = la::silhouette(x, fits[i].labels);
  });

  PartitionResult out;
  out.k = embedding.k;
  out.mode = embedding.mode;
  std::size_t best = 0;
  for (std::size_t i = 0; i < count; ++i) {
    out.silhouette_by_r.push_back({options.r_min + static_cast<int>(i), score[i]});
    if (score[i] > score[best]) best = i;
  }
  out.clustered_r = options.r_min + static_cast<int>(best);
  out.silhouette = score[best];

  auto repaired = repair_connectivity(fits[best].labels, static_cast<std::size_t>(n), edges);
  out.labels = std::move(repaired.labels);
  out.moved_fragments = repaired.moved_fragments;
  out.r = *std::max_element(out.labels.begin(), out.labels.end()) + 1;
  out.bus_ids = std::move(bus_ids);
  out.embedding = embedding;
  return out;
}

PartitionResult partition(const model::Snapshot& snapshot, const inertia::InertiaProfile& profile,
                          const PartitionOptions& options) {
  const auto embedding = spectral_modes(snapshot, profile, options.include_damping, options.embedding);
  return cluster_embedding(embedding, snapshot.bus_ids(), susceptance_edges(snapshot), options);
}

std::string partition_csv(const PartitionResult& result) {
  std::ostringstream os;
  os << "bus_id,region\n";
  for (std::size_t i = 0; i < result.bus_ids.size(); ++i)
    os << result.bus_ids[i].value << ',' << result.labels[i] + 1 << '\n';
  return os.str();
}

std::string partition_dot(const PartitionResult& result, const model::Snapshot& snapshot) {
  std::ostringstream os;
  os << "graph regions {\n  node [style=filled, colorscheme=set312];\n";
  for (std::size_t i = 0; i < result.bus_ids.size(); ++i)
    os << "  b" << result.bus_ids[i].value << " [label=\"" << result.bus_ids[i].value << "\", fillcolor="
       << (result.labels[i] % 12) + 1 << ", region=" << result.labels[i] + 1 << "];\n";
  const auto& buses = snapshot.grid().buses;
  for (const auto& e : susceptance_edges(snapshot)) {
    os << "  b" << buses[e.a].id.value << " -- b" << buses[e.b].id.value;
    if (result.labels[e.a] != result.labels[e.b]) os << " [style=dashed]";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace gridinertia::partition
