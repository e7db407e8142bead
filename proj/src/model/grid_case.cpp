#include "gridinertia/model/grid_case.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gridinertia/error.hpp"

namespace gridinertia::model {

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::synchronous_condenser: return "synchronous_condenser";
    case DeviceKind::synchronous_motor: return "synchronous_motor";
    case DeviceKind::grid_forming: return "grid_forming";
    case DeviceKind::grid_following: return "grid_following";
  }
  return "unknown";
}

std::optional<DeviceKind> parse_device_kind(std::string_view text) {
  for (auto k : {DeviceKind::synchronous_condenser, DeviceKind::synchronous_motor, DeviceKind::grid_forming,
                 DeviceKind::grid_following}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

InertialDevice InertialDevice::grid_forming(int id, BusId bus, double t_omega, double m_p, double x, double p,
                                            double q) {
  InertialDevice d;
  d.id = id;
  d.bus = bus;
  d.kind = DeviceKind::grid_forming;
  d.t_omega = t_omega;
  d.m_p = m_p;
  d.inertia_h = t_omega / m_p;
  d.damping_d = 1.0 / m_p;
  d.coupling_reactance = x;
  d.p_inject = p;
  d.q_inject = q;
  return d;
}

BusIndex::BusIndex(const GridCase& grid) {
  map_.reserve(grid.buses.size());
  for (std::size_t i = 0; i < grid.buses.size(); ++i) map_.emplace(grid.buses[i].id, i);
}

std::optional<std::size_t> BusIndex::find(BusId id) const {
  auto it = map_.find(id);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::size_t BusIndex::at(BusId id) const {
  auto i = find(id);
  if (!i) throw ReferenceError("unknown bus " + to_string(id));
  return *i;
}

std::vector<int> bus_components(const GridCase& grid, const BusIndex& index) {
  const std::size_t n = grid.buses.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& br : grid.branches) {
    if (!br.in_service) continue;
    auto a = root(index.at(br.from));
    auto b = root(index.at(br.to));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> label(n, -1);
  std::vector<int> by_root(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = root(i);
    if (by_root[r] < 0) by_root[r] = next++;
    label[i] = by_root[r];
  }
  return label;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace

void validate(const GridCase& grid, const ValidationOptions& options) {
  require(!grid.buses.empty(), "case has no buses");
  require(grid.system.base_mva > 0.0, "system base_mva must be positive");
  require(grid.system.frequency_hz > 0.0, "system frequency_hz must be positive");

  std::set<BusId> seen;
  for (const auto& b : grid.buses) {
    if (!seen.insert(b.id).second) throw InvariantError("duplicate bus id " + to_string(b.id));
    require(std::isfinite(b.voltage_mag) && b.voltage_mag > 0.0,
            "bus " + to_string(b.id) + ": voltage magnitude must be positive");
    require(std::isfinite(b.voltage_ang), "bus " + to_string(b.id) + ": voltage angle must be finite");
  }
  const BusIndex index(grid);
  auto known = [&](BusId id, const std::string& who) {
    if (!index.find(id)) throw ReferenceError(who + " references unknown bus " + to_string(id));
  };

  for (std::size_t k = 0; k < grid.branches.size(); ++k) {
    const auto& br = grid.branches[k];
    const std::string who = "branch " + to_string(br.from) + "-" + to_string(br.to);
    known(br.from, who);
    known(br.to, who);
    require(br.from != br.to, who + ": endpoints must differ");
    require(std::isfinite(br.reactance) && br.reactance > 0.0, who + ": reactance must be positive");
  }

  std::set<int> ids;
  bool any_inertia = false;
  for (const auto& m : grid.machines) {
    const std::string who = "machine " + std::to_string(m.id);
    if (!ids.insert(m.id).second) throw InvariantError("duplicate source id " + std::to_string(m.id));
    known(m.bus, who);
    require(m.inertia_h > 0.0, who + ": H must be positive");
    require(m.xd_prime > 0.0, who + ": x'd must be positive");
    require(m.damping_d >= 0.0, who + ": D must be nonnegative");
    any_inertia = true;
  }
  for (const auto& d : grid.devices) {
    const std::string who = "device " + std::to_string(d.id);
    if (!ids.insert(d.id).second) throw InvariantError("duplicate source id " + std::to_string(d.id));
    known(d.bus, who);
    require(d.inertia_h >= 0.0, who + ": H must be nonnegative");
    require(d.damping_d >= 0.0, who + ": D must be nonnegative");
    require(d.coupling_reactance > 0.0, who + ": coupling reactance must be positive");
    if (d.kind == DeviceKind::grid_following) require(d.inertia_h == 0.0, who + ": grid-following devices carry no inertia");
    if (d.m_p) require(*d.m_p > 0.0, who + ": m_p must be positive");
    any_inertia = any_inertia || d.inertia_h > 0.0;
  }
  require(any_inertia, "case has no machine or device with positive inertia");

  if (options.require_connected) {
    auto comp = bus_components(grid, index);
    if (*std::max_element(comp.begin(), comp.end()) > 0) {
      std::size_t i = std::find(comp.begin(), comp.end(), 1) - comp.begin();
      throw InvariantError("network is not connected over in-service branches (bus " +
                           to_string(grid.buses[i].id) + " is isolated from bus " + to_string(grid.buses[0].id) +
                           ")");
    }
  }
}

}  // namespace gridinertia::model
