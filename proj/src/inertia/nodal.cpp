#include <cmath>
#include <limits>

#include "gridinertia/error.hpp"
#include "gridinertia/inertia/inertia.hpp"

namespace gridinertia::inertia {

std::string_view to_string(InertiaConvention c) {
  return c == InertiaConvention::classical ? "classical" : "starting_time";
}

std::optional<InertiaConvention> parse_convention(std::string_view text) {
  if (text == "starting_time") return InertiaConvention::starting_time;
  if (text == "classical") return InertiaConvention::classical;
  return std::nullopt;
}

std::optional<double> InertiaProfile::at(model::BusId id) const {
  for (std::size_t i = 0; i < bus_ids.size(); ++i)
    if (bus_ids[i] == id) return present[i] ? std::optional<double>(h(static_cast<la::Index>(i))) : std::nullopt;
  return std::nullopt;
}

Vector nodal_inertia_scalar(const FreqDivider& divider, const SpcMatrix& spc, const Vector& m) {
  const auto n = divider.matrix.rows();
  Vector h(n);
  for (la::Index j = 0; j < n; ++j) {
    if (!divider.energized[static_cast<std::size_t>(j)]) {
      h(j) = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double s = 0.0;
    for (la::Index k = 0; k < m.size(); ++k) s += divider.matrix(j, k) * spc.matrix(k, j) / m(k);
    h(j) = 1.0 / s;
  }
  return h;
}

Matrix damping_distribution(const FreqDivider& divider, const Vector& d, const Vector& m) {
  const Vector per_bus = divider.matrix * d.cwiseQuotient(m);
  return per_bus.asDiagonal();
}

Matrix damping_distribution(const model::Snapshot& snapshot, const Options& options) {
  const auto src = inertial_source_set(snapshot);
  if (src.size() == 0) throw ComputationError("no source with positive inertia");
  return damping_distribution(build_frequency_divider(snapshot), src.damping_d, src.swing(options.convention));
}

InertiaProfile nodal_inertia(const model::Snapshot& snapshot, const Options& options) {
  const auto src = inertial_source_set(snapshot);
  if (src.size() == 0) throw ComputationError("no source with positive inertia");

  InertiaProfile p;
  p.bus_ids = snapshot.bus_ids();
  p.source_ids = src.ids;
  p.convention = options.convention;
  p.source_m = src.swing(options.convention);
  p.source_d = src.damping_d;
  p.divider = build_frequency_divider(snapshot);
  p.spc = build_spc(snapshot);
  p.present = p.divider.energized;

  p.k = p.spc.coefficient;
  p.k_h = p.k.colwise().sum().transpose();
  p.f = p.divider.matrix.cwiseProduct(p.k.transpose()) * p.source_m.cwiseInverse().asDiagonal();
  p.f_h = p.f.rowwise().sum();

  const auto n = static_cast<la::Index>(p.bus_ids.size());
  p.h.resize(n);
  for (la::Index j = 0; j < n; ++j) {
    if (!p.present[static_cast<std::size_t>(j)]) {
      p.h(j) = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    p.h(j) = p.k_h(j) / p.f_h(j);
    if (!std::isfinite(p.h(j)) || !(p.h(j) > 0.0))
      throw ComputationError("nonphysical nodal inertia at bus " + model::to_string(p.bus_ids[static_cast<std::size_t>(j)]));
  }
  p.r = damping_distribution(p.divider, p.source_d, p.source_m);
  return p;
}

}  // namespace gridinertia::inertia
