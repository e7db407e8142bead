#include <cmath>
#include <map>

#include "gridinertia/partition/partition.hpp"

namespace gridinertia::partition {

std::string_view to_string(Mode mode) { return mode == Mode::damped_qep ? "damped_qep" : "undamped_pencil"; }

std::vector<Edge> susceptance_edges(const model::Snapshot& snapshot) {
  std::map<std::pair<std::size_t, std::size_t>, double> sum;
  const auto& index = snapshot.index();
  for (const auto& br : snapshot.grid().branches) {
    if (!br.in_service) continue;
    auto a = index.at(br.from);
    auto b = index.at(br.to);
    if (a > b) std::swap(a, b);
    sum[{a, b}] += 1.0 / br.reactance;
  }
  std::vector<Edge> edges;
  edges.reserve(sum.size());
  for (const auto& [key, w] : sum) edges.push_back({key.first, key.second, w});
  return edges;
}

NetworkLaplacian build_laplacian(const model::Snapshot& snapshot) {
  const auto n = static_cast<la::Index>(snapshot.bus_count());
  const auto& buses = snapshot.grid().buses;
  NetworkLaplacian out{Matrix::Zero(n, n)};
  for (const auto& e : susceptance_edges(snapshot)) {
    const auto& bi = buses[e.a];
    const auto& bj = buses[e.b];
    const double w = bi.voltage_mag * bj.voltage_mag * e.weight * std::cos(bi.voltage_ang - bj.voltage_ang);
    const auto a = static_cast<la::Index>(e.a);
    const auto b = static_cast<la::Index>(e.b);
    out.l(a, b) -= w;
    out.l(b, a) -= w;
  }
  for (la::Index i = 0; i < n; ++i) out.l(i, i) = -out.l.row(i).sum();
  return out;
}

}  // namespace gridinertia::partition
