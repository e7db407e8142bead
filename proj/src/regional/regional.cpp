#include "gridinertia/regional/regional.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gridinertia/error.hpp"

namespace gridinertia::regional {

const RegionSummary& RegionalReport::containing(model::BusId bus) const {
  for (const auto& r : regions)
    for (auto m : r.members)
      if (m == bus) return r;
  throw ReferenceError("bus " + model::to_string(bus) + " is in no region of report '" + scenario + "'");
}

RegionalReport regional_inertia(const inertia::InertiaProfile& profile, const partition::PartitionResult& regions,
                                const model::Snapshot& snapshot, std::string scenario) {
  if (regions.bus_ids != profile.bus_ids || profile.bus_ids != snapshot.bus_ids())
    throw InvariantError("partition, profile and snapshot must cover the same buses");
  RegionalReport report;
  report.scenario = std::move(scenario);
  report.regions.resize(static_cast<std::size_t>(regions.r));
  for (int reg = 0; reg < regions.r; ++reg) {
    auto& s = report.regions[static_cast<std::size_t>(reg)];
    s.region = reg;
    double sum = 0.0;
    int counted = 0;
    for (auto i : regions.members(reg)) {
      s.members.push_back(profile.bus_ids[i]);
      if (profile.present[i]) {
        sum += profile.h(static_cast<la::Index>(i));
        ++counted;
      }
    }
    s.h_eff = counted > 0 ? sum / counted : std::numeric_limits<double>::quiet_NaN();
  }
  for (auto k : snapshot.inertial()) {
    const auto& src = snapshot.sources()[k];
    auto& s = report.regions[static_cast<std::size_t>(regions.labels[src.bus_index])];
    s.h_conv += src.inertia_h;
    s.source_ids.push_back(src.id);
  }
  return report;
}

RegionalReport with_deltas(RegionalReport scenario, const RegionalReport& base) {
  if (scenario.regions.size() != base.regions.size())
    throw InvariantError("scenario and base reports have different region counts");
  for (std::size_t r = 0; r < scenario.regions.size(); ++r) {
    auto& s = scenario.regions[r];
    const auto& b = base.regions[r];
    if (s.members != b.members) throw InvariantError("scenario and base regions differ in membership");
    s.delta_h_eff = s.h_eff - b.h_eff;
    s.delta_h_conv = s.h_conv - b.h_conv;
  }
  scenario.base_scenario = base.scenario;
  return scenario;
}

std::string report_csv(std::span<const RegionalReport> reports) {
  std::ostringstream os;
  os.precision(10);
  os << "scenario,region,bus_count,members,h_eff_seconds,h_conv_seconds,delta_h_eff,delta_h_conv\n";
  for (const auto& rep : reports) {
    for (const auto& s : rep.regions) {
      os << rep.scenario << ',' << s.region + 1 << ',' << s.members.size() << ',';
      for (std::size_t i = 0; i < s.members.size(); ++i) os << (i ? ";" : "") << s.members[i].value;
      os << ',' << s.h_eff << ',' << s.h_conv << ',';
      if (s.delta_h_eff) os << *s.delta_h_eff;
      os << ',';
      if (s.delta_h_conv) os << *s.delta_h_conv;
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace gridinertia::regional
