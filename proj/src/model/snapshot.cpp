#include "gridinertia/model/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "gridinertia/error.hpp"
#include "gridinertia/model/case_io.hpp"
#include "gridinertia/tolerances.hpp"
#include "gridinertia/version.hpp"

namespace gridinertia::model {

namespace {

using cd = std::complex<double>;

struct Emf {
  double mag;
  double angle;
};

Emf emf_behind(const Bus& bus, double p, double q, double x, const std::string& who) {
  if (bus.voltage_mag < tol::min_terminal_voltage)
    throw InvariantError(who + ": zero terminal voltage at bus " + to_string(bus.id));
  const cd v = std::polar(bus.voltage_mag, bus.voltage_ang);
  const cd i = std::conj(cd(p, q) / v);
  const cd e = v + cd(0.0, x) * i;
  return {std::abs(e), std::arg(e)};
}

// Angle for a prescribed |E| so that the branch carries p.
Emf emf_fixed(const Bus& bus, double p, double x, double mag, const std::string& who) {
  const double s = p * x / (mag * bus.voltage_mag);
  if (!(mag > 0.0) || std::abs(s) > 1.0)
    throw InvariantError(who + ": internal voltage cannot deliver the specified power");
  return {mag, bus.voltage_ang + std::asin(s)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string Source::label() const {
  return (kind == SourceKind::machine ? "machine " : "device ") + std::to_string(id);
}

std::vector<Source> Snapshot::inertial_sources() const {
  std::vector<Source> out;
  out.reserve(state_->inertial.size());
  for (auto k : state_->inertial) out.push_back(state_->sources[k]);
  return out;
}

std::string Snapshot::provenance() const {
  std::string out;
  for (const auto& h : state_->history) {
    if (!out.empty()) out += " | ";
    out += h;
  }
  return out;
}

std::vector<BusId> Snapshot::bus_ids() const {
  std::vector<BusId> ids;
  ids.reserve(bus_count());
  for (const auto& b : grid().buses) ids.push_back(b.id);
  return ids;
}

Snapshot compute_internal_emf(GridCase grid, std::vector<std::string> history) {
  auto state = std::make_shared<Snapshot::State>();
  state->index = BusIndex(grid);
  for (const auto& m : grid.machines) {
    Source s;
    s.kind = SourceKind::machine;
    s.id = m.id;
    s.bus = m.bus;
    s.bus_index = state->index.at(m.bus);
    s.inertia_h = m.inertia_h;
    s.damping_d = m.damping_d;
    s.reactance = m.xd_prime;
    s.p = m.p_gen;
    s.q = m.q_gen;
    auto e = emf_behind(grid.buses[s.bus_index], s.p, s.q, s.reactance, s.label());
    s.emf_mag = e.mag;
    s.internal_angle = e.angle;
    state->sources.push_back(s);
  }
  for (const auto& d : grid.devices) {
    Source s;
    s.kind = SourceKind::device;
    s.device_kind = d.kind;
    s.id = d.id;
    s.bus = d.bus;
    s.bus_index = state->index.at(d.bus);
    s.inertia_h = d.inertia_h;
    s.damping_d = d.damping_d;
    s.reactance = d.coupling_reactance;
    s.p = d.p_inject;
    s.q = d.q_inject;
    const auto& bus = grid.buses[s.bus_index];
    auto e = d.emf_mag ? emf_fixed(bus, s.p, s.reactance, *d.emf_mag, s.label())
                       : emf_behind(bus, s.p, s.q, s.reactance, s.label());
    s.emf_mag = e.mag;
    s.internal_angle = e.angle;
    state->sources.push_back(s);
  }
  for (std::size_t k = 0; k < state->sources.size(); ++k)
    if (state->sources[k].inertial()) state->inertial.push_back(k);
  state->grid = std::move(grid);
  state->history = std::move(history);
  return Snapshot(std::move(state));
}

Snapshot compute_internal_emf(GridCase grid, std::string origin) {
  return compute_internal_emf(std::move(grid), std::vector<std::string>{std::move(origin)});
}

Snapshot attach_device(const Snapshot& snapshot, InertialDevice device) {
  const auto& grid = snapshot.grid();
  if (!snapshot.index().find(device.bus))
    throw ReferenceError("cannot attach device " + std::to_string(device.id) + ": unknown bus " +
                         to_string(device.bus));
  if (!(device.coupling_reactance > 0.0))
    throw InvariantError("device " + std::to_string(device.id) + ": coupling reactance must be positive");
  if (!(device.inertia_h >= 0.0) || !(device.damping_d >= 0.0))
    throw InvariantError("device " + std::to_string(device.id) + ": H and D must be nonnegative");
  for (const auto& s : snapshot.sources())
    if (s.id == device.id) throw InvariantError("duplicate source id " + std::to_string(device.id));

  GridCase next = grid;
  next.devices.push_back(device);
  auto history = snapshot.history();
  history.push_back("attach_device(id=" + std::to_string(device.id) + ", bus=" + to_string(device.bus) +
                    ", kind=" + std::string(to_string(device.kind)) + ", H=" + fmt(device.inertia_h) +
                    ", x=" + fmt(device.coupling_reactance) + ")");
  return compute_internal_emf(std::move(next), std::move(history));
}

Snapshot detach_device(const Snapshot& snapshot, int device_id) {
  GridCase next = snapshot.grid();
  auto it = std::find_if(next.devices.begin(), next.devices.end(), [&](const auto& d) { return d.id == device_id; });
  if (it == next.devices.end()) throw ReferenceError("no device with id " + std::to_string(device_id));
  next.devices.erase(it);
  auto history = snapshot.history();
  history.push_back("detach_device(id=" + std::to_string(device_id) + ")");
  return compute_internal_emf(std::move(next), std::move(history));
}

Snapshot scale_branch_reactance(const Snapshot& snapshot, BusId from, BusId to, double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0))
    throw InvariantError("reactance scale factor must be positive, got " + fmt(alpha));
  GridCase next = snapshot.grid();
  int hits = 0;
  for (auto& br : next.branches) {
    const bool match = (br.from == from && br.to == to) || (br.from == to && br.to == from);
    if (match && br.in_service) {
      br.reactance *= alpha;
      ++hits;
    }
  }
  if (hits == 0) throw ReferenceError("no in-service branch " + to_string(from) + "-" + to_string(to));
  auto history = snapshot.history();
  history.push_back("scale_branch_reactance(" + to_string(from) + "-" + to_string(to) + ", alpha=" + fmt(alpha) +
                    ")");
  return compute_internal_emf(std::move(next), std::move(history));
}

std::uint64_t digest(const Snapshot& snapshot) {
  auto h = fnv1a(serialize_case(snapshot.grid()));
  for (const auto& entry : snapshot.history()) h = fnv1a(entry, fnv1a("\n", h));
  return h;
}

}  // namespace gridinertia::model
