#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/model/grid_case.hpp"

namespace gridinertia::cli {

enum class Command { inertia, partition, whatif, simulate };
enum class WhatIf { device_sweep, min_h, line_sweep };

struct DeviceTemplate {
  std::string kind = "synchronous_condenser";
  double x = 0.15;
  double p = 0.0;
  double q = 0.0;
  double d = 0.0;
  std::optional<double> t_omega;
  std::optional<double> m_p;
};

struct RunConfig {
  std::filesystem::path case_path;
  Command command = Command::inertia;
  WhatIf whatif = WhatIf::min_h;
  std::filesystem::path out_dir = ".";
  std::uint64_t seed = 42;
  int r_min = 2;
  std::optional<int> r_max;  // default min(10, n_bus - 1)
  bool damped = false;
  bool row_normalize = false;
  inertia::InertiaConvention convention = inertia::InertiaConvention::starting_time;
  std::optional<int> bus;
  std::optional<int> from_bus;
  std::optional<int> to_bus;
  std::optional<int> region_bus;
  double dp = 0.01;
  double t_step = 0.0;
  double dt = 1e-3;
  double horizon = 10.0;
  std::vector<double> h_grid;
  std::vector<double> alpha_grid;
  DeviceTemplate device;
  std::optional<int> device_bus;  // simulate: attach one device per H in h_grid
  bool csv = true;
  bool json = true;
};

std::string canonical_config(const RunConfig& config);
std::string config_digest(const RunConfig& config);

std::vector<double> default_h_grid();
std::vector<double> default_alpha_grid();

model::InertialDevice make_device(const DeviceTemplate& t, int id, model::BusId bus, double h);

struct Outcome {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> warnings;
  std::string summary;
};

Outcome cmd_inertia(const RunConfig& config);
Outcome cmd_partition(const RunConfig& config);
Outcome cmd_whatif(const RunConfig& config);
Outcome cmd_simulate(const RunConfig& config);
Outcome run(const RunConfig& config);

// Parses argv and runs; returns the process exit code (0 ok, 1 computation, 2 input).
int main_entry(int argc, char** argv);

}  // namespace gridinertia::cli
