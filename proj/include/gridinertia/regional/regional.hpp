#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/model/snapshot.hpp"
#include "gridinertia/partition/partition.hpp"

namespace gridinertia::regional {

using la::Matrix;
using la::Vector;

struct RegionSummary {
  int region = 0;
  std::vector<model::BusId> members;
  std::vector<int> source_ids;  // inertial sources located inside the region
  double h_eff = 0.0;           // mean member nodal inertia
  double h_conv = 0.0;          // sum of member source H
  std::optional<double> delta_h_eff;
  std::optional<double> delta_h_conv;
};

struct RegionalReport {
  std::string scenario;
  std::optional<std::string> base_scenario;
  std::vector<RegionSummary> regions;

  const RegionSummary& containing(model::BusId bus) const;
};

RegionalReport regional_inertia(const inertia::InertiaProfile& profile, const partition::PartitionResult& regions,
                                const model::Snapshot& snapshot, std::string scenario = "base");

RegionalReport with_deltas(RegionalReport scenario, const RegionalReport& base);

std::string report_csv(std::span<const RegionalReport> reports);

// bounded:         every H >= h_min raises h at the bus.
// any_positive:    the device carries a negative share, so any H > 0 helps (h_min = 0).
// no_finite_bound: sum (F - F') / H_k <= 0, no lower bound on H exists.
enum class MinInertiaStatus { bounded, any_positive, no_finite_bound };

std::string_view to_string(MinInertiaStatus status);

struct MinInertiaResult {
  model::BusId bus;
  MinInertiaStatus status = MinInertiaStatus::bounded;
  std::optional<double> h_min;
  double h_old = 0.0;
  double f_device = 0.0;
  std::vector<int> source_ids;
  std::vector<double> source_h;
  std::vector<double> f_existing;  // D_jk S_kj before attachment
  std::vector<double> f_updated;   // same with the device in the network
  double denominator = 0.0;
  std::string diagnostic;
};

// The template's H is irrelevant: the divider and SPC depend only on the network.
MinInertiaResult min_device_inertia(const model::Snapshot& snapshot, model::BusId bus,
                                    model::InertialDevice device_template, const inertia::Options& options = {});

struct DeviceSweep {
  model::BusId bus;
  std::vector<double> h_grid;
  std::vector<model::BusId> bus_ids;
  Matrix h;  // grid point x bus
  Vector base;
  double base_at_bus = 0.0;
  std::optional<double> crossing;  // interpolated H where h at the bus reaches its base value
};

DeviceSweep device_h_sweep(const model::Snapshot& snapshot, model::BusId bus, model::InertialDevice device_template,
                           std::span<const double> h_grid, const inertia::Options& options = {});

struct ReactanceSweepRow {
  double alpha = 1.0;
  double h_eff = 0.0;
  double h_conv = 0.0;
};

struct ReactanceSweep {
  model::BusId from;
  model::BusId to;
  int region = 0;
  std::vector<model::BusId> members;
  std::vector<ReactanceSweepRow> rows;
};

// Regions stay fixed at the supplied partition while the branch is scaled.
ReactanceSweep reactance_sweep(const model::Snapshot& snapshot, model::BusId from, model::BusId to,
                               std::span<const double> alphas, const partition::PartitionResult& regions, int region,
                               const inertia::Options& options = {});

int fresh_source_id(const model::Snapshot& snapshot);

}  // namespace gridinertia::regional
