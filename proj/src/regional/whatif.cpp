#include <algorithm>
#include <cmath>

#include "gridinertia/error.hpp"
#include "gridinertia/parallel.hpp"
#include "gridinertia/regional/regional.hpp"

namespace gridinertia::regional {

std::string_view to_string(MinInertiaStatus status) {
  switch (status) {
    case MinInertiaStatus::bounded: return "bounded";
    case MinInertiaStatus::any_positive: return "any_positive";
    case MinInertiaStatus::no_finite_bound: return "no_finite_h";
  }
  return "unknown";
}

int fresh_source_id(const model::Snapshot& snapshot) {
  int id = 0;
  for (const auto& s : snapshot.sources()) id = std::max(id, s.id);
  return id + 1;
}

namespace {

model::InertialDevice placed(const model::Snapshot& snapshot, model::BusId bus, model::InertialDevice d) {
  if (d.kind == model::DeviceKind::grid_following)
    throw InvariantError("a grid-following device has no inertia to size");
  d.bus = bus;
  for (const auto& s : snapshot.sources())
    if (s.id == d.id) d.id = fresh_source_id(snapshot);
  return d;
}

// D_jk S_kj for every inertial source at bus j.
std::vector<double> weights(const inertia::FreqDivider& div, const inertia::SpcMatrix& spc, la::Index j) {
  std::vector<double> w(static_cast<std::size_t>(div.matrix.cols()));
  for (la::Index k = 0; k < div.matrix.cols(); ++k) w[static_cast<std::size_t>(k)] = div.matrix(j, k) * spc.matrix(k, j);
  return w;
}

}  // namespace

MinInertiaResult min_device_inertia(const model::Snapshot& snapshot, model::BusId bus,
                                    model::InertialDevice device_template, const inertia::Options& options) {
  const auto j = static_cast<la::Index>(snapshot.index().at(bus));
  auto device = placed(snapshot, bus, device_template);
  device.inertia_h = 1.0;

  const auto src = inertia::inertial_source_set(snapshot);
  if (src.size() == 0) throw ComputationError("no existing inertial source");
  const auto before_div = inertia::build_frequency_divider(snapshot);
  if (!before_div.energized[static_cast<std::size_t>(j)])
    throw ComputationError("bus " + model::to_string(bus) + " has no inertial path");
  const auto before_spc = inertia::build_spc(snapshot);

  const auto with = model::attach_device(snapshot, device);
  const auto after_div = inertia::build_frequency_divider(with);
  const auto after_spc = inertia::build_spc(with);
  const auto after_src = inertia::inertial_source_set(with);

  MinInertiaResult out;
  out.bus = bus;
  out.source_ids = src.ids;
  out.source_h.assign(src.inertia_h.data(), src.inertia_h.data() + src.inertia_h.size());
  out.f_existing = weights(before_div, before_spc, j);
  const auto after = weights(after_div, after_spc, j);
  const auto dev = std::find(after_src.ids.begin(), after_src.ids.end(), device.id) - after_src.ids.begin();
  out.f_device = after[static_cast<std::size_t>(dev)];
  for (std::size_t k = 0; k < src.size(); ++k) {
    const auto pos = std::find(after_src.ids.begin(), after_src.ids.end(), src.ids[k]) - after_src.ids.begin();
    out.f_updated.push_back(after[static_cast<std::size_t>(pos)]);
  }

  double inv = 0.0;
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double hk = src.inertia_h(static_cast<la::Index>(k));
    out.denominator += (out.f_existing[k] - out.f_updated[k]) / hk;
    inv += out.f_existing[k] / inertia::swing_coefficient(hk, options.convention);
  }
  out.h_old = 1.0 / inv;

  if (!(out.denominator > 0.0)) {
    out.status = MinInertiaStatus::no_finite_bound;
    out.diagnostic = "no finite H improves h at bus " + model::to_string(bus) +
                     ": the device does not relieve the existing sources (sum of (F - F')/H = " +
                     std::to_string(out.denominator) + ")";
  } else if (!(out.f_device > 0.0)) {
    out.status = MinInertiaStatus::any_positive;
    out.h_min = 0.0;
    out.diagnostic = "device share at bus " + model::to_string(bus) + " is nonpositive; any H > 0 raises h";
  } else {
    out.status = MinInertiaStatus::bounded;
    out.h_min = out.f_device / out.denominator;
  }
  return out;
}

DeviceSweep device_h_sweep(const model::Snapshot& snapshot, model::BusId bus, model::InertialDevice device_template,
                           std::span<const double> h_grid, const inertia::Options& options) {
  for (double h : h_grid)
    if (!(h > 0.0) || !std::isfinite(h)) throw InvariantError("device sweep values must be positive");
  const auto j = static_cast<la::Index>(snapshot.index().at(bus));
  const auto device = placed(snapshot, bus, device_template);

  DeviceSweep out;
  out.bus = bus;
  out.h_grid.assign(h_grid.begin(), h_grid.end());
  out.bus_ids = snapshot.bus_ids();
  const auto base = inertia::nodal_inertia(snapshot, options);
  out.base = base.h;
  out.base_at_bus = base.h(j);
  out.h.resize(static_cast<la::Index>(h_grid.size()), static_cast<la::Index>(out.bus_ids.size()));

  parallel_for(h_grid.size(), [&](std::size_t g) {
    auto d = device;
    d.inertia_h = h_grid[g];
    const auto p = inertia::nodal_inertia(model::attach_device(snapshot, d), options);
    out.h.row(static_cast<la::Index>(g)) = p.h.transpose();
  });

  for (std::size_t g = 1; g < h_grid.size(); ++g) {
    const double a = out.h(static_cast<la::Index>(g - 1), j) - out.base_at_bus;
    const double b = out.h(static_cast<la::Index>(g), j) - out.base_at_bus;
    if (a < 0.0 && b >= 0.0) {
      out.crossing = h_grid[g - 1] + (h_grid[g] - h_grid[g - 1]) * (-a) / (b - a);
      break;
    }
  }
  return out;
}

ReactanceSweep reactance_sweep(const model::Snapshot& snapshot, model::BusId from, model::BusId to,
                               std::span<const double> alphas, const partition::PartitionResult& regions, int region,
                               const inertia::Options& options) {
  if (region < 0 || region >= regions.r) throw ReferenceError("region index out of range");
  ReactanceSweep out;
  out.from = from;
  out.to = to;
  out.region = region;
  for (auto i : regions.members(region)) out.members.push_back(regions.bus_ids[i]);
  out.rows.resize(alphas.size());

  parallel_for(alphas.size(), [&](std::size_t a) {
    const auto scaled = model::scale_branch_reactance(snapshot, from, to, alphas[a]);
    const auto p = inertia::nodal_inertia(scaled, options);
    const auto rep = regional_inertia(p, regions, scaled);
    const auto& s = rep.regions[static_cast<std::size_t>(region)];
    out.rows[a] = {alphas[a], s.h_eff, s.h_conv};
  });
  return out;
}

}  // namespace gridinertia::regional
