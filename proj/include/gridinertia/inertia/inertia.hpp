#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "gridinertia/la/dense.hpp"
#include "gridinertia/model/snapshot.hpp"

namespace gridinertia::inertia {

using la::Matrix;
using la::Vector;

// starting_time: M = H, so a lone machine obeys H dw/dt = -dP.
// classical:     M = 2H, the swing-equation form 2H dw/dt = -dP.
enum class InertiaConvention { starting_time, classical };

std::string_view to_string(InertiaConvention c);
std::optional<InertiaConvention> parse_convention(std::string_view text);

inline double swing_coefficient(double h, InertiaConvention c) {
  return c == InertiaConvention::classical ? 2.0 * h : h;
}

struct Options {
  InertiaConvention convention = InertiaConvention::starting_time;
};

// Sources with H > 0, in snapshot order.
struct SourceSet {
  std::vector<std::size_t> positions;  // into Snapshot::sources()
  std::vector<int> ids;
  std::vector<std::size_t> bus_index;
  Vector emf, angle, reactance, inertia_h, damping_d;

  std::size_t size() const { return ids.size(); }
  Vector swing(InertiaConvention c) const;
};

SourceSet inertial_source_set(const model::Snapshot& snapshot);

// Buses reachable from at least one inertial source.
std::vector<bool> energized_buses(const model::Snapshot& snapshot);

// Laplacian-form susceptance matrix over the energized buses followed by
// the inertial sources' internal nodes.
struct AugmentedNetwork {
  Matrix y;
  std::vector<std::size_t> active;  // bus indices, in order
  std::size_t n_src = 0;
};

AugmentedNetwork augmented_network(const model::Snapshot& snapshot);

struct FreqDivider {
  Matrix matrix;  // n_bus x n_src
  std::vector<bool> energized;
};

FreqDivider build_frequency_divider(const model::Snapshot& snapshot);

struct SpcMatrix {
  Matrix matrix;                  // n_src x n_bus, column j = shares for a step at bus j
  Matrix equivalent_susceptance;  // n_src x n_bus
  Matrix coefficient;             // n_src x n_bus, E_k V_j B_kj cos(delta_k - theta_j)
  std::vector<bool> energized;
};

SpcMatrix build_spc(const model::Snapshot& snapshot);

struct InertiaProfile {
  std::vector<model::BusId> bus_ids;
  std::vector<int> source_ids;
  InertiaConvention convention = InertiaConvention::starting_time;
  Vector source_m;
  Vector source_d;
  FreqDivider divider;
  SpcMatrix spc;
  Matrix k;      // n_src x n_bus
  Vector k_h;    // n_bus
  Matrix f;      // n_bus x n_src
  Vector f_h;    // n_bus
  Vector h;      // n_bus, NaN where absent
  std::vector<bool> present;
  Matrix r;      // n_bus x n_bus diagonal

  std::optional<double> at(model::BusId id) const;
};

InertiaProfile nodal_inertia(const model::Snapshot& snapshot, const Options& options = {});

// Per-bus harmonic form 1 / sum_k D_jk S_kj / M_k.
Vector nodal_inertia_scalar(const FreqDivider& divider, const SpcMatrix& spc, const Vector& m);

Matrix damping_distribution(const FreqDivider& divider, const Vector& d, const Vector& m);
Matrix damping_distribution(const model::Snapshot& snapshot, const Options& options = {});

}  // namespace gridinertia::inertia
