#include "gridinertia/model/case_io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "gridinertia/error.hpp"

namespace gridinertia::model {

namespace {

using json = nlohmann::json;

constexpr double deg = std::numbers::pi / 180.0;

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>& warnings)
      : node_(node), path_(std::move(path)), warnings_(warnings) {
    if (!node_.is_object()) throw ParseError("expected an object", path_);
  }

  bool has(const char* key) const { return node_.contains(key) && !node_.at(key).is_null(); }

  double number(const char* key) const {
    if (!has(key)) throw ParseError("missing required field", field(key));
    const auto& v = node_.at(key);
    if (!v.is_number()) throw ParseError("expected a number", field(key));
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError("expected a finite number", field(key));
    return x;
  }

  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::optional<double> optional_number(const char* key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  int integer(const char* key) const {
    if (!has(key)) throw ParseError("missing required field", field(key));
    const auto& v = node_.at(key);
    if (!v.is_number_integer()) throw ParseError("expected an integer", field(key));
    return v.get<int>();
  }

  std::string text(const char* key, const std::string& fallback = {}) const {
    if (!has(key)) return fallback;
    const auto& v = node_.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    throw ParseError("expected a string", field(key));
  }

  bool flag(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = node_.at(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return v.get<int>() != 0;
    throw ParseError("expected a boolean or 0/1", field(key));
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, _] : node_.items())
      if (!ok.count(k)) warnings_.push_back(path_ + ": ignored unknown field '" + k + "'");
  }

  std::string field(const char* key) const { return path_ + "." + key; }

 private:
  const json& node_;
  std::string path_;
  std::vector<std::string>& warnings_;
};

const json& section(const json& root, const char* key, bool required) {
  static const json empty = json::array();
  if (!root.contains(key)) {
    if (required) throw ParseError("missing required section", key);
    return empty;
  }
  const auto& s = root.at(key);
  if (!s.is_array()) throw ParseError("expected an array", key);
  return s;
}

std::string item_path(const char* sec, std::size_t i) { return std::string(sec) + "[" + std::to_string(i) + "]"; }

GridCase from_json(const json& root) {
  if (!root.is_object()) throw ParseError("top level must be an object");
  GridCase grid;
  auto& warn = grid.warnings;

  if (root.contains("system")) {
    Reader r(root.at("system"), "system", warn);
    r.allow({"name", "base_mva", "frequency_hz", "inertia_base", "notes", "reference_load_step_pu"});
    grid.system.name = r.text("name");
    grid.system.base_mva = r.number("base_mva", 100.0);
    grid.system.frequency_hz = r.number("frequency_hz", 60.0);
    grid.system.inertia_base = r.text("inertia_base", "system");
    grid.system.notes = r.text("notes");
    grid.system.reference_load_step = r.optional_number("reference_load_step_pu");
  }
  if (grid.system.inertia_base != "system")
    throw ParseError("only inertia constants on the system base are supported", "system.inertia_base");

  const auto& buses = section(root, "buses", true);
  for (std::size_t i = 0; i < buses.size(); ++i) {
    Reader r(buses[i], item_path("buses", i), warn);
    r.allow({"id", "name", "vm", "va_deg", "p_load", "q_load"});
    Bus b;
    b.id = BusId{r.integer("id")};
    b.name = r.text("name", std::to_string(b.id.value));
    b.voltage_mag = r.number("vm");
    b.voltage_ang = r.number("va_deg") * deg;
    b.p_load = r.number("p_load", 0.0);
    b.q_load = r.number("q_load", 0.0);
    grid.buses.push_back(std::move(b));
  }

  std::size_t lossy = 0;
  const auto& branches = section(root, "branches", true);
  for (std::size_t i = 0; i < branches.size(); ++i) {
    Reader r(branches[i], item_path("branches", i), warn);
    r.allow({"from", "to", "x", "r", "status"});
    Branch br;
    br.from = BusId{r.integer("from")};
    br.to = BusId{r.integer("to")};
    br.reactance = r.number("x");
    br.in_service = r.flag("status", true);
    if (r.number("r", 0.0) != 0.0) ++lossy;
    grid.branches.push_back(br);
  }
  if (lossy > 0)
    warn.push_back("dropped series resistance on " + std::to_string(lossy) +
                   " branch(es); the network is treated as lossless");

  const auto& machines = section(root, "machines", false);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    Reader r(machines[i], item_path("machines", i), warn);
    r.allow({"id", "bus", "H", "D", "xd_prime", "p_gen", "q_gen"});
    SyncMachine m;
    m.id = r.integer("id");
    m.bus = BusId{r.integer("bus")};
    m.inertia_h = r.number("H");
    m.damping_d = r.number("D", 0.0);
    m.xd_prime = r.number("xd_prime");
    m.p_gen = r.number("p_gen", 0.0);
    m.q_gen = r.number("q_gen", 0.0);
    grid.machines.push_back(m);
  }

  const auto& devices = section(root, "devices", false);
  for (std::size_t i = 0; i < devices.size(); ++i) {
    const auto path = item_path("devices", i);
    Reader r(devices[i], path, warn);
    r.allow({"id", "bus", "kind", "H", "D", "T_omega", "m_p", "x", "p_inject", "q_inject", "emf_mag"});
    InertialDevice d;
    d.id = r.integer("id");
    d.bus = BusId{r.integer("bus")};
    const auto kind = r.text("kind");
    auto parsed = parse_device_kind(kind);
    if (!parsed) throw ParseError("unknown device kind '" + kind + "'", path + ".kind");
    d.kind = *parsed;
    d.t_omega = r.optional_number("T_omega");
    d.m_p = r.optional_number("m_p");
    if (d.t_omega.has_value() != d.m_p.has_value())
      throw ParseError("T_omega and m_p must be given together", path);
    if (d.m_p && !(*d.m_p > 0.0)) throw ParseError("m_p must be positive", path + ".m_p");
    if (r.has("H")) {
      d.inertia_h = r.number("H");
    } else if (d.m_p) {
      d.inertia_h = *d.t_omega / *d.m_p;
    } else if (d.kind != DeviceKind::grid_following) {
      throw ParseError("missing required field (H, or T_omega with m_p)", path + ".H");
    }
    d.damping_d = r.has("D") ? r.number("D") : (d.m_p ? 1.0 / *d.m_p : 0.0);
    d.coupling_reactance = r.number("x");
    d.p_inject = r.number("p_inject", 0.0);
    d.q_inject = r.number("q_inject", 0.0);
    d.emf_mag = r.optional_number("emf_mag");
    grid.devices.push_back(d);
  }
  return grid;
}

}  // namespace

GridCase parse_case(std::string_view text, const ValidationOptions& options) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("malformed case file (byte " + std::to_string(e.byte) + ")", {}, line_of(text, e.byte));
  }
  GridCase grid;
  try {
    grid = from_json(root);
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
  validate(grid, options);
  return grid;
}

GridCase load_case(const std::filesystem::path& path, const ValidationOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open case file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const auto text = buf.str();
  try {
    return parse_case(text, options);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_case(const GridCase& grid) {
  json root;
  json sys = {{"name", grid.system.name},
              {"base_mva", grid.system.base_mva},
              {"frequency_hz", grid.system.frequency_hz},
              {"inertia_base", grid.system.inertia_base},
              {"notes", grid.system.notes}};
  if (grid.system.reference_load_step) sys["reference_load_step_pu"] = *grid.system.reference_load_step;
  root["system"] = sys;
  auto& buses = root["buses"] = json::array();
  for (const auto& b : grid.buses)
    buses.push_back({{"id", b.id.value},
                     {"name", b.name},
                     {"vm", b.voltage_mag},
                     {"va_deg", b.voltage_ang / deg},
                     {"p_load", b.p_load},
                     {"q_load", b.q_load}});
  auto& branches = root["branches"] = json::array();
  for (const auto& br : grid.branches)
    branches.push_back({{"from", br.from.value}, {"to", br.to.value}, {"x", br.reactance}, {"status", br.in_service ? 1 : 0}});
  auto& machines = root["machines"] = json::array();
  for (const auto& m : grid.machines)
    machines.push_back({{"id", m.id},
                        {"bus", m.bus.value},
                        {"H", m.inertia_h},
                        {"D", m.damping_d},
                        {"xd_prime", m.xd_prime},
                        {"p_gen", m.p_gen},
                        {"q_gen", m.q_gen}});
  auto& devices = root["devices"] = json::array();
  for (const auto& d : grid.devices) {
    json j = {{"id", d.id},
              {"bus", d.bus.value},
              {"kind", std::string(to_string(d.kind))},
              {"H", d.inertia_h},
              {"D", d.damping_d},
              {"x", d.coupling_reactance},
              {"p_inject", d.p_inject},
              {"q_inject", d.q_inject}};
    if (d.t_omega) j["T_omega"] = *d.t_omega;
    if (d.m_p) j["m_p"] = *d.m_p;
    if (d.emf_mag) j["emf_mag"] = *d.emf_mag;
    devices.push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

Snapshot load_snapshot(const std::filesystem::path& path, const ValidationOptions& options) {
  auto grid = load_case(path, options);
  return compute_internal_emf(std::move(grid), "case:" + path.string());
}

}  // namespace gridinertia::model
