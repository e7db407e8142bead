#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridinertia/model/grid_case.hpp"

namespace gridinertia::model {

enum class SourceKind { machine, device };

// A machine or device reduced to an EMF behind a reactance.
struct Source {
  SourceKind kind = SourceKind::machine;
  int id = 0;
  BusId bus;
  std::size_t bus_index = 0;
  double inertia_h = 0.0;
  double damping_d = 0.0;
  double reactance = 0.0;
  double p = 0.0;
  double q = 0.0;
  double emf_mag = 0.0;
  double internal_angle = 0.0;
  std::optional<DeviceKind> device_kind;

  bool inertial() const { return inertia_h > 0.0; }
  std::string label() const;
};

class Snapshot {
 public:
  const GridCase& grid() const { return state_->grid; }
  const BusIndex& index() const { return state_->index; }
  std::size_t bus_count() const { return state_->grid.buses.size(); }

  // Machines in file order, then devices in file order.
  std::span<const Source> sources() const { return state_->sources; }
  // Positions in sources() of those with H > 0.
  const std::vector<std::size_t>& inertial() const { return state_->inertial; }
  std::vector<Source> inertial_sources() const;

  const std::vector<std::string>& history() const { return state_->history; }
  std::string provenance() const;

  std::vector<BusId> bus_ids() const;

 private:
  struct State {
    GridCase grid;
    BusIndex index;
    std::vector<Source> sources;
    std::vector<std::size_t> inertial;
    std::vector<std::string> history;
  };

  explicit Snapshot(std::shared_ptr<const State> state) : state_(std::move(state)) {}
  std::shared_ptr<const State> state_;

  friend Snapshot compute_internal_emf(GridCase grid, std::vector<std::string> history);
};

// E = V + j x I with I = conj(S / V); throws InvariantError on a zero terminal voltage.
Snapshot compute_internal_emf(GridCase grid, std::vector<std::string> history);
Snapshot compute_internal_emf(GridCase grid, std::string origin);

Snapshot attach_device(const Snapshot& snapshot, InertialDevice device);
Snapshot detach_device(const Snapshot& snapshot, int device_id);
// Scales every in-service branch joining the two buses.
Snapshot scale_branch_reactance(const Snapshot& snapshot, BusId from, BusId to, double alpha);

// FNV-1a over the serialized case and provenance.
std::uint64_t digest(const Snapshot& snapshot);

}  // namespace gridinertia::model
