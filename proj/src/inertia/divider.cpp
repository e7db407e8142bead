#include <cmath>
#include <numeric>

#include "gridinertia/error.hpp"
#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/parallel.hpp"

namespace gridinertia::inertia {

Vector SourceSet::swing(InertiaConvention c) const {
  Vector m(static_cast<la::Index>(size()));
  for (la::Index k = 0; k < m.size(); ++k) m(k) = swing_coefficient(inertia_h(k), c);
  return m;
}

SourceSet inertial_source_set(const model::Snapshot& snapshot) {
  SourceSet set;
  const auto& inertial = snapshot.inertial();
  const auto m = static_cast<la::Index>(inertial.size());
  set.emf.resize(m);
  set.angle.resize(m);
  set.reactance.resize(m);
  set.inertia_h.resize(m);
  set.damping_d.resize(m);
  for (la::Index k = 0; k < m; ++k) {
    const auto& s = snapshot.sources()[inertial[static_cast<std::size_t>(k)]];
    set.positions.push_back(inertial[static_cast<std::size_t>(k)]);
    set.ids.push_back(s.id);
    set.bus_index.push_back(s.bus_index);
    set.emf(k) = s.emf_mag;
    set.angle(k) = s.internal_angle;
    set.reactance(k) = s.reactance;
    set.inertia_h(k) = s.inertia_h;
    set.damping_d(k) = s.damping_d;
  }
  return set;
}

std::vector<bool> energized_buses(const model::Snapshot& snapshot) {
  const auto comp = model::bus_components(snapshot.grid(), snapshot.index());
  std::vector<bool> live_comp(comp.size(), false);
  for (auto k : snapshot.inertial()) live_comp[static_cast<std::size_t>(comp[snapshot.sources()[k].bus_index])] = true;
  std::vector<bool> out(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i) out[i] = live_comp[static_cast<std::size_t>(comp[i])];
  return out;
}

AugmentedNetwork augmented_network(const model::Snapshot& snapshot) {
  const auto energized = energized_buses(snapshot);
  const auto src = inertial_source_set(snapshot);
  AugmentedNetwork net;
  std::vector<la::Index> pos(energized.size(), -1);
  for (std::size_t i = 0; i < energized.size(); ++i) {
    if (!energized[i]) continue;
    pos[i] = static_cast<la::Index>(net.active.size());
    net.active.push_back(i);
  }
  const auto na = static_cast<la::Index>(net.active.size());
  net.n_src = src.size();
  const auto dim = na + static_cast<la::Index>(net.n_src);
  net.y = Matrix::Zero(dim, dim);
  auto couple = [&](la::Index a, la::Index b, double s) {
    net.y(a, a) += s;
    net.y(b, b) += s;
    net.y(a, b) -= s;
    net.y(b, a) -= s;
  };
  const auto& index = snapshot.index();
  for (const auto& br : snapshot.grid().branches) {
    if (!br.in_service) continue;
    const auto a = pos[index.at(br.from)];
    const auto b = pos[index.at(br.to)];
    if (a < 0 || b < 0) continue;
    couple(a, b, 1.0 / br.reactance);
  }
  for (la::Index k = 0; k < static_cast<la::Index>(net.n_src); ++k)
    couple(pos[src.bus_index[static_cast<std::size_t>(k)]], na + k, 1.0 / src.reactance(k));
  return net;
}

FreqDivider build_frequency_divider(const model::Snapshot& snapshot) {
  const auto net = augmented_network(snapshot);
  const auto na = static_cast<la::Index>(net.active.size());
  const auto m = static_cast<la::Index>(net.n_src);
  FreqDivider out;
  out.energized = energized_buses(snapshot);
  out.matrix = Matrix::Zero(static_cast<la::Index>(snapshot.bus_count()), m);
  if (m == 0) return out;
  const Matrix g = -net.y.block(0, na, na, m);
  const Matrix d = la::solve(net.y.topLeftCorner(na, na), g, "frequency divider");
  for (la::Index p = 0; p < na; ++p) out.matrix.row(static_cast<la::Index>(net.active[static_cast<std::size_t>(p)])) = d.row(p);
  return out;
}

SpcMatrix build_spc(const model::Snapshot& snapshot) {
  const auto net = augmented_network(snapshot);
  const auto src = inertial_source_set(snapshot);
  const auto na = static_cast<la::Index>(net.active.size());
  const auto m = static_cast<la::Index>(net.n_src);
  const auto n = static_cast<la::Index>(snapshot.bus_count());
  const auto& buses = snapshot.grid().buses;

  SpcMatrix out;
  out.energized = energized_buses(snapshot);
  out.matrix = Matrix::Zero(m, n);
  out.equivalent_susceptance = Matrix::Zero(m, n);
  out.coefficient = Matrix::Zero(m, n);

  std::vector<la::Index> sources(static_cast<std::size_t>(m));
  std::iota(sources.begin(), sources.end(), na);

  parallel_for(static_cast<std::size_t>(na), [&](std::size_t p) {
    const auto j = static_cast<la::Index>(net.active[p]);
    std::vector<la::Index> keep = sources;
    keep.push_back(static_cast<la::Index>(p));
    const Matrix red = la::kron_reduce(net.y, keep);
    const double vj = buses[static_cast<std::size_t>(j)].voltage_mag;
    const double thj = buses[static_cast<std::size_t>(j)].voltage_ang;
    double total = 0.0;
    for (la::Index k = 0; k < m; ++k) {
      const double b = -red(k, m);
      const double c = src.emf(k) * vj * b * std::cos(src.angle(k) - thj);
      out.equivalent_susceptance(k, j) = b;
      out.coefficient(k, j) = c;
      total += c;
    }
    if (!(total > 0.0))
      throw ComputationError("nonpositive total synchronizing coefficient at bus " +
                             model::to_string(buses[static_cast<std::size_t>(j)].id));
    out.matrix.col(j) = out.coefficient.col(j) / total;
  });
  return out;
}

}  // namespace gridinertia::inertia
