#include "gridinertia/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gridinertia/cli/outputs.hpp"
#include "gridinertia/error.hpp"
#include "gridinertia/inertia/audit.hpp"
#include "gridinertia/model/case_io.hpp"
#include "gridinertia/parallel.hpp"
#include "gridinertia/partition/partition.hpp"
#include "gridinertia/regional/regional.hpp"
#include "gridinertia/sim/swing.hpp"
#include "gridinertia/version.hpp"

namespace gridinertia::cli {

using nlohmann::json;

namespace {

const char* command_name(Command c) {
  switch (c) {
    case Command::inertia: return "inertia";
    case Command::partition: return "partition";
    case Command::whatif: return "whatif";
    case Command::simulate: return "simulate";
  }
  return "?";
}

const char* whatif_name(WhatIf w) {
  switch (w) {
    case WhatIf::device_sweep: return "device-sweep";
    case WhatIf::min_h: return "min-h";
    case WhatIf::line_sweep: return "line-sweep";
  }
  return "?";
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }
std::string opt(const std::optional<double>& v) { return v ? number(*v) : "-"; }

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + number(v[i]);
  return out;
}

struct Context {
  model::Snapshot snapshot;
  OutputSink sink;
  inertia::Options options;
  Outcome outcome;
};

Context open(const RunConfig& config) {
  auto snapshot = model::load_snapshot(config.case_path);
  json meta = {{"toolkit_version", std::string(toolkit_version)},
               {"config_digest", config_digest(config)},
               {"case_digest", hex(model::digest(snapshot))},
               {"provenance", snapshot.provenance()},
               {"command", command_name(config.command)},
               {"seed", config.seed},
               {"convention", std::string(inertia::to_string(config.convention))}};
  Context ctx{snapshot, OutputSink(config.out_dir, meta, config.csv, config.json), {config.convention}, {}};
  ctx.outcome.warnings = snapshot.grid().warnings;
  return ctx;
}

Outcome finish(Context& ctx, std::string summary) {
  ctx.outcome.written = ctx.sink.written();
  ctx.outcome.summary = std::move(summary);
  return ctx.outcome;
}

partition::PartitionOptions partition_options(const RunConfig& c, const model::Snapshot& snap) {
  partition::PartitionOptions o;
  o.r_min = c.r_min;
  o.r_max = c.r_max.value_or(std::min(10, static_cast<int>(snap.bus_count()) - 1));
  o.seed = c.seed;
  o.include_damping = c.damped;
  o.embedding.row_normalize = c.row_normalize;
  return o;
}

int require_bus(const std::optional<int>& bus, const char* flag) {
  if (!bus) throw InputError(std::string("missing required option ") + flag);
  return *bus;
}

json ids_json(const std::vector<model::BusId>& ids) {
  auto out = json::array();
  for (auto id : ids) out.push_back(id.value);
  return out;
}

json report_json(const regional::RegionalReport& rep) {
  auto regions = json::array();
  for (const auto& s : rep.regions) {
    json r = {{"region", s.region + 1},
              {"members", ids_json(s.members)},
              {"sources", s.source_ids},
              {"h_eff_seconds", s.h_eff},
              {"h_conv_seconds", s.h_conv}};
    if (s.delta_h_eff) r["delta_h_eff"] = *s.delta_h_eff;
    if (s.delta_h_conv) r["delta_h_conv"] = *s.delta_h_conv;
    regions.push_back(std::move(r));
  }
  json j = {{"scenario", rep.scenario}, {"regions", regions}};
  if (rep.base_scenario) j["base_scenario"] = *rep.base_scenario;
  return j;
}

json partition_json(const partition::PartitionResult& p) {
  auto sil = json::array();
  for (const auto& e : p.silhouette_by_r) sil.push_back({{"r", e.r}, {"silhouette", e.score}});
  auto gaps = json::array();
  for (std::size_t i = 0; i < p.embedding.eigengap.size(); ++i) {
    const double g = p.embedding.eigengap[i];
    gaps.push_back({{"i", i + 2}, {"gamma", std::isfinite(g) ? json(g) : json(nullptr)}});
  }
  auto used = json::array();
  for (auto v : p.embedding.eigenvalues) used.push_back({{"re", v.real()}, {"im", v.imag()}});
  auto labels = json::array();
  for (std::size_t i = 0; i < p.bus_ids.size(); ++i)
    labels.push_back({{"bus_id", p.bus_ids[i].value}, {"region", p.labels[i] + 1}});
  return {{"mode", std::string(partition::to_string(p.mode))},
          {"k", p.k},
          {"r", p.r},
          {"clustered_r", p.clustered_r},
          {"silhouette", p.silhouette},
          {"silhouette_by_r", sil},
          {"eigengap", gaps},
          {"magnitudes", p.embedding.magnitudes},
          {"eigenvalues_used", used},
          {"moved_fragments", p.moved_fragments},
          {"labels", labels}};
}

}  // namespace

std::vector<double> default_h_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 100; ++i) g.push_back(0.1 * i);
  return g;
}

std::vector<double> default_alpha_grid() { return {1.0, 2.0, 5.0, 10.0, 20.0}; }

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "case=" << c.case_path.string() << "\ncommand=" << command_name(c.command);
  if (c.command == Command::whatif) os << "\nwhatif=" << whatif_name(c.whatif);
  os << "\nseed=" << c.seed << "\nr=" << c.r_min << ":" << opt(c.r_max) << "\ndamped=" << c.damped
     << "\nrow_normalize=" << c.row_normalize << "\nconvention=" << inertia::to_string(c.convention)
     << "\nbus=" << opt(c.bus) << "\nfrom=" << opt(c.from_bus) << "\nto=" << opt(c.to_bus)
     << "\nregion_bus=" << opt(c.region_bus) << "\ndp=" << number(c.dp) << "\nt_step=" << number(c.t_step)
     << "\ndt=" << number(c.dt) << "\nhorizon=" << number(c.horizon) << "\nh_grid=" << list(c.h_grid)
     << "\nalpha_grid=" << list(c.alpha_grid) << "\ndevice=" << c.device.kind << "," << number(c.device.x) << ","
     << number(c.device.p) << "," << number(c.device.q) << "," << number(c.device.d) << ","
     << opt(c.device.t_omega) << "," << opt(c.device.m_p) << "\ndevice_bus=" << opt(c.device_bus)
     << "\nformat=" << c.csv << c.json << "\n";
  return os.str();
}

std::string config_digest(const RunConfig& config) { return hex(fnv1a(canonical_config(config))); }

model::InertialDevice make_device(const DeviceTemplate& t, int id, model::BusId bus, double h) {
  auto kind = model::parse_device_kind(t.kind);
  if (!kind) throw InputError("unknown device kind '" + t.kind + "'");
  model::InertialDevice d;
  if (t.t_omega || t.m_p) {
    if (!t.t_omega || !t.m_p) throw InputError("--t-omega and --m-p must be given together");
    d = model::InertialDevice::grid_forming(id, bus, *t.t_omega, *t.m_p, t.x, t.p, t.q);
    d.kind = *kind;
  } else {
    d.id = id;
    d.bus = bus;
    d.kind = *kind;
    d.damping_d = t.d;
    d.coupling_reactance = t.x;
    d.p_inject = t.p;
    d.q_inject = t.q;
  }
  if (h >= 0.0) d.inertia_h = h;
  return d;
}

Outcome cmd_inertia(const RunConfig& config) {
  auto ctx = open(config);
  const auto profile = inertia::nodal_inertia(ctx.snapshot, ctx.options);
  ctx.sink.csv("inertia.csv", inertia::profile_csv(profile));

  la::Index arg_max = -1, arg_min = -1, gen_min = -1;
  std::vector<char> gen_bus(profile.bus_ids.size(), 0);
  for (const auto& s : ctx.snapshot.sources())
    if (s.kind == model::SourceKind::machine) gen_bus[s.bus_index] = 1;
  int absent = 0;
  for (la::Index j = 0; j < profile.h.size(); ++j) {
    if (!profile.present[static_cast<std::size_t>(j)]) {
      ++absent;
      continue;
    }
    if (arg_max < 0 || profile.h(j) > profile.h(arg_max)) arg_max = j;
    if (arg_min < 0 || profile.h(j) < profile.h(arg_min)) arg_min = j;
    if (gen_bus[static_cast<std::size_t>(j)] && (gen_min < 0 || profile.h(j) < profile.h(gen_min))) gen_min = j;
  }
  auto entry = [&](la::Index j) -> json {
    if (j < 0) return nullptr;
    return {{"bus_id", profile.bus_ids[static_cast<std::size_t>(j)].value}, {"h_seconds", profile.h(j)}};
  };
  auto audit = inertia::profile_audit(profile);
  audit["summary"] = {{"max", entry(arg_max)},
                      {"min", entry(arg_min)},
                      {"generator_bus_min", entry(gen_min)},
                      {"absent_buses", absent}};
  ctx.sink.json("inertia_audit.json", audit);

  std::ostringstream s;
  s << profile.bus_ids.size() << " buses, " << profile.source_ids.size() << " inertial sources";
  if (arg_max >= 0)
    s << "; max h " << number(profile.h(arg_max)) << " s at bus " << profile.bus_ids[static_cast<std::size_t>(arg_max)].value
      << "; min h " << number(profile.h(arg_min)) << " s at bus " << profile.bus_ids[static_cast<std::size_t>(arg_min)].value;
  if (absent) s << "; " << absent << " bus(es) without an inertial path";
  return finish(ctx, s.str());
}

Outcome cmd_partition(const RunConfig& config) {
  auto ctx = open(config);
  const auto profile = inertia::nodal_inertia(ctx.snapshot, ctx.options);
  const auto result = partition::partition(ctx.snapshot, profile, partition_options(config, ctx.snapshot));
  const auto report = regional::regional_inertia(profile, result, ctx.snapshot);

  ctx.sink.csv("regions.csv", partition::partition_csv(result));
  ctx.sink.text("regions.dot", "//", partition::partition_dot(result, ctx.snapshot));
  const regional::RegionalReport reports[] = {report};
  ctx.sink.csv("regional.csv", regional::report_csv(reports));
  auto j = partition_json(result);
  j["regional"] = report_json(report);
  ctx.sink.json("partition.json", j);

  std::ostringstream s;
  s << "k = " << result.k << ", r = " << result.r << " (silhouette " << number(result.silhouette) << ")";
  for (const auto& reg : report.regions) {
    s << "\n  region " << reg.region + 1 << ": H_eff " << number(reg.h_eff) << " s, H_conv " << number(reg.h_conv)
      << " s, buses";
    for (auto b : reg.members) s << ' ' << b.value;
  }
  return finish(ctx, s.str());
}

Outcome cmd_whatif(const RunConfig& config) {
  auto ctx = open(config);
  const auto& snap = ctx.snapshot;
  const int fresh = regional::fresh_source_id(snap);
  std::ostringstream s;

  if (config.whatif == WhatIf::device_sweep) {
    const model::BusId bus{require_bus(config.bus, "--bus")};
    const auto grid = config.h_grid.empty() ? default_h_grid() : config.h_grid;
    const auto dev = make_device(config.device, fresh, bus, 1.0);
    const auto sweep = regional::device_h_sweep(snap, bus, dev, grid, ctx.options);
    const auto bound = regional::min_device_inertia(snap, bus, dev, ctx.options);

    std::ostringstream csv;
    csv.precision(12);
    csv << "h_device_seconds,bus_id,h_seconds\n";
    for (std::size_t g = 0; g < grid.size(); ++g)
      for (std::size_t b = 0; b < sweep.bus_ids.size(); ++b)
        csv << number(grid[g]) << ',' << sweep.bus_ids[b].value << ','
            << number(sweep.h(static_cast<la::Index>(g), static_cast<la::Index>(b))) << '\n';
    ctx.sink.csv("device_sweep.csv", csv.str());

    const auto j = static_cast<la::Index>(snap.index().at(bus));
    std::vector<double> at_bus;
    for (la::Index g = 0; g < sweep.h.rows(); ++g) at_bus.push_back(sweep.h(g, j));
    ctx.sink.json("device_sweep.json",
                  {{"bus", bus.value},
                   {"device_kind", config.device.kind},
                   {"coupling_reactance", config.device.x},
                   {"h_grid", grid},
                   {"h_at_bus", at_bus},
                   {"base_h_at_bus", sweep.base_at_bus},
                   {"crossing_h_device", sweep.crossing ? json(*sweep.crossing) : json(nullptr)},
                   {"analytic_h_min", bound.h_min ? json(*bound.h_min) : json(nullptr)}});
    s << "bus " << bus.value << ": base h " << number(sweep.base_at_bus) << " s; ";
    if (sweep.crossing)
      s << "improves for H_device above " << number(*sweep.crossing) << " s (sweep), " << opt(bound.h_min)
        << " s (closed form)";
    else
      s << "no crossing inside the sweep grid";
  } else if (config.whatif == WhatIf::min_h) {
    std::vector<model::BusId> buses;
    if (config.bus)
      buses.push_back({*config.bus});
    else
      buses = snap.bus_ids();
    std::vector<regional::MinInertiaResult> results(buses.size());
    const auto energized = inertia::energized_buses(snap);
    parallel_for(buses.size(), [&](std::size_t i) {
      if (!config.bus && !energized[snap.index().at(buses[i])]) return;
      const auto dev = make_device(config.device, fresh, buses[i], 1.0);
      results[i] = regional::min_device_inertia(snap, buses[i], dev, ctx.options);
    });
    std::ostringstream csv;
    csv << "bus_id,status,h_min_seconds,h_old_seconds,f_device,denominator\n";
    auto records = json::array();
    for (std::size_t i = 0; i < buses.size(); ++i) {
      const auto& r = results[i];
      if (r.source_ids.empty()) continue;
      const bool bounded = r.h_min.has_value();
      const std::string status(regional::to_string(r.status));
      csv << buses[i].value << ',' << status << ','
          << (bounded ? number(*r.h_min) : "") << ',' << number(r.h_old) << ',' << number(r.f_device) << ','
          << number(r.denominator) << '\n';
      json rec = {{"bus_id", buses[i].value},
                  {"status", status},
                  {"h_min_seconds", bounded ? json(*r.h_min) : json(nullptr)},
                  {"h_old_seconds", r.h_old},
                  {"f_device", r.f_device},
                  {"sources", r.source_ids},
                  {"source_h", r.source_h},
                  {"f_existing", r.f_existing},
                  {"f_updated", r.f_updated},
                  {"denominator", r.denominator}};
      if (!r.diagnostic.empty()) rec["diagnostic"] = r.diagnostic;
      records.push_back(std::move(rec));
    }
    ctx.sink.csv("min_h.csv", csv.str());
    ctx.sink.json("min_h.json", {{"device_kind", config.device.kind},
                                 {"coupling_reactance", config.device.x},
                                 {"p_inject", config.device.p},
                                 {"results", records}});
    if (config.bus) {
      const auto& r = results[0];
      if (r.status == regional::MinInertiaStatus::bounded)
        s << "bus " << *config.bus << ": H_min " << number(*r.h_min) << " s (h before " << number(r.h_old) << " s)";
      else
        s << r.diagnostic;
    } else {
      s << records.size() << " buses evaluated";
    }
  } else {
    const model::BusId from{require_bus(config.from_bus, "--from")};
    const model::BusId to{require_bus(config.to_bus, "--to")};
    const model::BusId anchor{config.region_bus.value_or(to.value)};
    const auto alphas = config.alpha_grid.empty() ? default_alpha_grid() : config.alpha_grid;
    const auto profile = inertia::nodal_inertia(snap, ctx.options);
    const auto regions = partition::partition(snap, profile, partition_options(config, snap));
    const int region = regions.region_of(anchor);
    const auto sweep = regional::reactance_sweep(snap, from, to, alphas, regions, region, ctx.options);

    std::ostringstream csv;
    csv << "alpha,h_eff_seconds,h_conv_seconds\n";
    auto rows = json::array();
    for (const auto& r : sweep.rows) {
      csv << number(r.alpha) << ',' << number(r.h_eff) << ',' << number(r.h_conv) << '\n';
      rows.push_back({{"alpha", r.alpha}, {"h_eff_seconds", r.h_eff}, {"h_conv_seconds", r.h_conv}});
    }
    ctx.sink.csv("line_sweep.csv", csv.str());
    ctx.sink.json("line_sweep.json", {{"from", from.value},
                                      {"to", to.value},
                                      {"region", region + 1},
                                      {"members", ids_json(sweep.members)},
                                      {"rows", rows}});
    s << "branch " << from.value << "-" << to.value << ", region " << region + 1 << " (" << sweep.members.size()
      << " buses): H_conv " << number(sweep.rows.front().h_conv) << " s, H_eff";
    for (const auto& r : sweep.rows) s << ' ' << number(r.h_eff);
  }
  return finish(ctx, s.str());
}

Outcome cmd_simulate(const RunConfig& config) {
  auto ctx = open(config);
  const auto& snap = ctx.snapshot;
  const model::BusId bus{require_bus(config.bus, "--bus")};
  snap.index().at(bus);

  struct Scenario {
    std::string name;
    model::Snapshot snapshot;
  };
  std::vector<Scenario> scenarios{{"base", snap}};
  if (config.device_bus) {
    if (config.h_grid.empty()) throw InputError("--device-bus needs --h-grid");
    const int id = regional::fresh_source_id(snap);
    for (double h : config.h_grid) {
      auto dev = make_device(config.device, id, model::BusId{*config.device_bus}, h);
      scenarios.push_back({"device_H" + number(h), model::attach_device(snap, dev)});
    }
  }

  const auto profile = inertia::nodal_inertia(snap, ctx.options);
  const auto regions = partition::partition(snap, profile, partition_options(config, snap));

  sim::SimOptions so;
  so.dt = config.dt;
  so.horizon = config.horizon;
  std::vector<sim::SimResult> results(scenarios.size());
  parallel_for(scenarios.size(), [&](std::size_t i) {
    const auto model = sim::assemble_model(scenarios[i].snapshot, ctx.options);
    results[i] = sim::simulate_load_step(model, {bus, config.dp, config.t_step}, so);
  });

  // Plot-ready traces at a 10 ms stride; summaries use the full resolution.
  const auto stride = std::max<la::Index>(1, static_cast<la::Index>(std::llround(0.01 / config.dt)));
  std::vector<std::vector<la::Vector>> regional(scenarios.size());
  auto summaries = json::array();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& res = results[i];
    std::ostringstream csv;
    csv << "time_s";
    for (auto id : res.bus_ids) csv << ",bus_" << id.value;
    csv << '\n';
    for (la::Index t = 0; t < res.time.size(); t += stride) {
      csv << number(res.time(t));
      for (la::Index b = 0; b < res.bus_frequency.cols(); ++b) csv << ',' << number(res.bus_frequency(t, b));
      csv << '\n';
    }
    ctx.sink.csv("frequency_" + scenarios[i].name + ".csv", csv.str());

    const auto rocof = res.initial_rocof();
    auto per_bus = json::array();
    for (std::size_t b = 0; b < res.bus_ids.size(); ++b)
      per_bus.push_back({{"bus_id", res.bus_ids[b].value}, {"initial_rocof", rocof(static_cast<la::Index>(b))}});
    auto per_region = json::array();
    const auto onset = res.onset_step();
    for (int r = 0; r < regions.r; ++r) {
      regional[i].push_back(sim::regional_average_frequency(res, regions, r));
      const auto& avg = regional[i].back();
      la::Index nadir = 0;
      avg.minCoeff(&nadir);
      per_region.push_back({{"region", r + 1},
                            {"initial_rocof", (avg(onset + 1) - avg(onset)) / res.dt},
                            {"nadir", avg(nadir)},
                            {"nadir_time_s", res.time(nadir)}});
    }
    summaries.push_back({{"scenario", scenarios[i].name},
                         {"provenance", scenarios[i].snapshot.provenance()},
                         {"buses", per_bus},
                         {"regions", per_region}});
  }

  std::ostringstream csv;
  csv << "time_s";
  for (const auto& sc : scenarios)
    for (int r = 0; r < regions.r; ++r) csv << ',' << sc.name << "/region_" << r + 1;
  csv << '\n';
  for (la::Index t = 0; t < results[0].time.size(); t += stride) {
    csv << number(results[0].time(t));
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      for (const auto& avg : regional[i]) csv << ',' << number(avg(t));
    csv << '\n';
  }
  ctx.sink.csv("regional_frequency.csv", csv.str());
  ctx.sink.json("simulation.json", {{"disturbance", {{"bus", bus.value}, {"delta_p", config.dp}, {"t_start", config.t_step}}},
                                    {"dt", config.dt},
                                    {"horizon", config.horizon},
                                    {"regions", partition_json(regions)["labels"]},
                                    {"scenarios", summaries}});

  std::ostringstream s;
  s << scenarios.size() << " scenario(s), step of " << number(config.dp) << " p.u. at bus " << bus.value;
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    s << "\n  " << scenarios[i].name << ": bus " << bus.value << " initial RoCoF "
      << number(results[i].initial_rocof()(static_cast<la::Index>(snap.index().at(bus)))) << " p.u./s";
  return finish(ctx, s.str());
}

Outcome run(const RunConfig& config) {
  switch (config.command) {
    case Command::inertia: return cmd_inertia(config);
    case Command::partition: return cmd_partition(config);
    case Command::whatif: return cmd_whatif(config);
    case Command::simulate: return cmd_simulate(config);
  }
  throw InputError("unknown command");
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Spatial inertia analysis of power networks"};
  app.set_version_flag("--version", std::string(toolkit_version));
  app.require_subcommand(1);
  RunConfig config;
  std::string format = "both";
  std::string convention = "starting_time";
  std::string mode;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--case", config.case_path, "Case file (JSON)")->required();
    sub->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", config.seed, "k-means seed")->capture_default_str();
    sub->add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}))->capture_default_str();
    sub->add_option("--convention", convention, "starting_time (M = H) or classical (M = 2H)")
        ->check(CLI::IsMember({"starting_time", "classical"}))
        ->capture_default_str();
  };
  auto clustering = [&](CLI::App* sub) {
    sub->add_option("--r-min", config.r_min, "Smallest region count")->capture_default_str();
    sub->add_option("--r-max", config.r_max, "Largest region count (default min(10, buses - 1))");
    sub->add_flag("--damped", config.damped, "Use the damped quadratic eigenproblem");
    sub->add_flag("--row-normalize", config.row_normalize, "Scale embedding rows to unit length");
  };
  auto device = [&](CLI::App* sub) {
    sub->add_option("--device-kind", config.device.kind, "Device kind")->capture_default_str();
    sub->add_option("--device-x", config.device.x, "Coupling reactance (p.u.)")->capture_default_str();
    sub->add_option("--device-p", config.device.p, "Active injection (p.u.)")->capture_default_str();
    sub->add_option("--device-q", config.device.q, "Reactive injection (p.u.)")->capture_default_str();
    sub->add_option("--device-d", config.device.d, "Damping (p.u.)")->capture_default_str();
    sub->add_option("--t-omega", config.device.t_omega, "Grid-forming filter time constant (s)");
    sub->add_option("--m-p", config.device.m_p, "Grid-forming droop gain");
  };

  auto* inertia_cmd = app.add_subcommand("inertia", "Nodal inertia distribution");
  common(inertia_cmd);

  auto* partition_cmd = app.add_subcommand("partition", "Coherent regions and regional inertia");
  common(partition_cmd);
  clustering(partition_cmd);

  auto* whatif_cmd = app.add_subcommand("whatif", "Device and line what-if studies");
  common(whatif_cmd);
  clustering(whatif_cmd);
  device(whatif_cmd);
  whatif_cmd->add_option("mode", mode, "device-sweep, min-h or line-sweep")
      ->required()
      ->check(CLI::IsMember({"device-sweep", "min-h", "line-sweep"}));
  whatif_cmd->add_option("--bus", config.bus, "Connection bus");
  whatif_cmd->add_option("--from", config.from_bus, "Branch from bus");
  whatif_cmd->add_option("--to", config.to_bus, "Branch to bus");
  whatif_cmd->add_option("--region-bus", config.region_bus, "Report the region containing this bus");
  whatif_cmd->add_option("--h-grid", config.h_grid, "Device H values (s), comma separated")->delimiter(',');
  whatif_cmd->add_option("--alpha-grid", config.alpha_grid, "Reactance factors, comma separated")->delimiter(',');

  auto* simulate_cmd = app.add_subcommand("simulate", "Classical swing simulation of a load step");
  common(simulate_cmd);
  clustering(simulate_cmd);
  device(simulate_cmd);
  simulate_cmd->add_option("--bus", config.bus, "Disturbance bus")->required();
  simulate_cmd->add_option("--dp", config.dp, "Load step (p.u., positive = load increase)")->capture_default_str();
  simulate_cmd->add_option("--t-step", config.t_step, "Step time (s)")->capture_default_str();
  simulate_cmd->add_option("--dt", config.dt, "Integration step (s)")->capture_default_str();
  simulate_cmd->add_option("--horizon", config.horizon, "Simulated time (s)")->capture_default_str();
  simulate_cmd->add_option("--device-bus", config.device_bus, "Attach one device per --h-grid value here");
  simulate_cmd->add_option("--h-grid", config.h_grid, "Device H values (s), comma separated")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (inertia_cmd->parsed()) config.command = Command::inertia;
  if (partition_cmd->parsed()) config.command = Command::partition;
  if (whatif_cmd->parsed()) config.command = Command::whatif;
  if (simulate_cmd->parsed()) config.command = Command::simulate;
  if (mode == "device-sweep") config.whatif = WhatIf::device_sweep;
  if (mode == "line-sweep") config.whatif = WhatIf::line_sweep;
  config.csv = format != "json";
  config.json = format != "csv";
  config.convention = *inertia::parse_convention(convention);

  try {
    const auto outcome = run(config);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << outcome.summary << '\n';
    for (const auto& p : outcome.written) std::cout << "wrote " << p.string() << '\n';
    return 0;
  } catch (const ComputationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace gridinertia::cli
