#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gridinertia::model {

struct BusId {
  int value = 0;
  friend auto operator<=>(BusId, BusId) = default;
};

inline std::string to_string(BusId id) { return std::to_string(id.value); }

}  // namespace gridinertia::model

template <>
struct std::hash<gridinertia::model::BusId> {
  std::size_t operator()(gridinertia::model::BusId id) const noexcept { return std::hash<int>{}(id.value); }
};

namespace gridinertia::model {

struct Bus {
  BusId id;
  std::string name;
  double voltage_mag = 1.0;
  double voltage_ang = 0.0;  // radians
  double p_load = 0.0;
  double q_load = 0.0;
};

struct Branch {
  BusId from;
  BusId to;
  double reactance = 0.0;
  bool in_service = true;
};

struct SyncMachine {
  int id = 0;
  BusId bus;
  double inertia_h = 0.0;
  double damping_d = 0.0;
  double xd_prime = 0.0;
  double p_gen = 0.0;
  double q_gen = 0.0;
};

enum class DeviceKind { synchronous_condenser, synchronous_motor, grid_forming, grid_following };

std::string_view to_string(DeviceKind kind);
std::optional<DeviceKind> parse_device_kind(std::string_view text);

struct InertialDevice {
  int id = 0;
  BusId bus;
  DeviceKind kind = DeviceKind::synchronous_condenser;
  double inertia_h = 0.0;
  double damping_d = 0.0;
  double coupling_reactance = 0.0;
  double p_inject = 0.0;
  double q_inject = 0.0;
  // Fixes |E|; the internal angle then follows from p_inject.
  std::optional<double> emf_mag;
  // Grid-forming droop parameters; when present H = t_omega / m_p and D = 1 / m_p.
  std::optional<double> t_omega;
  std::optional<double> m_p;

  static InertialDevice grid_forming(int id, BusId bus, double t_omega, double m_p, double x, double p = 0.0,
                                     double q = 0.0);
};

struct SystemInfo {
  std::string name;
  double base_mva = 100.0;
  double frequency_hz = 60.0;
  std::string inertia_base = "system";
  std::string notes;
  std::optional<double> reference_load_step;
};

struct GridCase {
  SystemInfo system;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<SyncMachine> machines;
  std::vector<InertialDevice> devices;
  std::vector<std::string> warnings;
};

struct ValidationOptions {
  bool require_connected = true;
};

// Throws ReferenceError or InvariantError.
void validate(const GridCase& grid, const ValidationOptions& options = {});

class BusIndex {
 public:
  BusIndex() = default;
  explicit BusIndex(const GridCase& grid);

  std::optional<std::size_t> find(BusId id) const;
  std::size_t at(BusId id) const;  // throws ReferenceError
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<BusId, std::size_t> map_;
};

// Connected component label per bus over in-service branches, numbered in bus order.
std::vector<int> bus_components(const GridCase& grid, const BusIndex& index);

}  // namespace gridinertia::model
