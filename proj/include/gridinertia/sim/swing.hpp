#pragma once

#include <vector>

#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/model/snapshot.hpp"
#include "gridinertia/partition/partition.hpp"
#include "gridinertia/tolerances.hpp"

namespace gridinertia::sim {

using la::Matrix;
using la::Vector;

// Linearized classical model:
//   M dw/dt = K_s dd - D w - s_j dP,   dd/dt = w_base w,
// over the internal nodes of the inertial sources.
struct ClassicalModel {
  std::vector<int> source_ids;
  std::vector<model::BusId> bus_ids;
  inertia::InertiaConvention convention = inertia::InertiaConvention::starting_time;
  Vector m;
  Vector d;
  Matrix k_s;        // n_src x n_src, zero row sums
  Matrix injection;  // n_src x n_bus, column j distributes a step at bus j
  Matrix divider;    // n_bus x n_src
  double omega_base = 0.0;

  Matrix state_matrix() const;
};

ClassicalModel assemble_model(const model::Snapshot& snapshot, const inertia::Options& options = {});

struct Disturbance {
  model::BusId bus;
  double delta_p = 0.0;  // positive = load increase
  double t_start = 0.0;
};

struct SimOptions {
  double horizon = tol::default_horizon;
  double dt = tol::default_dt;
  double divergence = tol::sim_divergence;
};

struct SimResult {
  std::vector<model::BusId> bus_ids;
  std::vector<int> source_ids;
  double dt = 0.0;
  double t_start = 0.0;
  Vector time;
  Matrix rotor_speed;       // step x source, per-unit deviation
  Matrix rotor_angle;       // step x source, radians
  Matrix electrical_power;  // step x source, per-unit deviation
  Matrix bus_frequency;     // step x bus, per-unit deviation
  Matrix bus_rocof;         // step x bus, per-unit per second

  // One-sided difference over the first step after the disturbance.
  Vector initial_rocof() const;
  la::Index onset_step() const;
};

SimResult simulate_load_step(const ClassicalModel& model, const Disturbance& disturbance,
                             const SimOptions& options = {});

Vector regional_average_frequency(const SimResult& result, const partition::PartitionResult& regions, int region);

}  // namespace gridinertia::sim
