#include <cmath>
#include <complex>
#include <string>

#include "doctest.h"
#include "gridinertia/error.hpp"
#include "gridinertia/model/case_io.hpp"
#include "support.hpp"

using namespace gridinertia;
using namespace gridinertia::model;

namespace {

const char* const two_bus = R"({
  "system": {"name": "two", "frequency_hz": 50.0},
  "buses": [
    {"id": 1, "vm": 1.02, "va_deg": 0.0},
    {"id": 2, "vm": 0.99, "va_deg": -7.5, "p_load": 0.8, "q_load": 0.2}
  ],
  "branches": [{"from": 1, "to": 2, "x": 0.25, "r": 0.01}],
  "machines": [{"id": 1, "bus": 1, "H": 5.0, "D": 1.0, "xd_prime": 0.3, "p_gen": 0.8, "q_gen": 0.35}],
  "devices": [{"id": 7, "bus": 2, "kind": "grid_forming", "T_omega": 0.5, "m_p": 0.05, "x": 0.1,
               "p_inject": 0.0, "q_inject": 0.1}]
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("parse reads every section and defaults grid-forming H and D") {
  auto grid = parse_case(two_bus);
  CHECK(grid.system.frequency_hz == 50.0);
  REQUIRE(grid.buses.size() == 2);
  CHECK(grid.buses[1].voltage_ang == doctest::Approx(-7.5 * M_PI / 180.0));
  REQUIRE(grid.devices.size() == 1);
  const auto& d = grid.devices[0];
  CHECK(d.kind == DeviceKind::grid_forming);
  CHECK(d.inertia_h == doctest::Approx(10.0));
  CHECK(d.damping_d == doctest::Approx(20.0));
}

TEST_CASE("series resistance is dropped with a single warning") {
  auto grid = parse_case(two_bus);
  REQUIRE(grid.warnings.size() == 1);
  CHECK(grid.warnings[0].find("resistance") != std::string::npos);
}

TEST_CASE("parse errors name the field") {
  SUBCASE("missing reactance") {
    auto text = replace(two_bus, R"("x": 0.25, )", "");
    try {
      parse_case(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.field() == "branches[0].x");
    }
  }
  SUBCASE("wrong type") {
    auto text = replace(two_bus, R"("H": 5.0)", R"("H": "five")");
    try {
      parse_case(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.field() == "machines[0].H");
    }
  }
  SUBCASE("malformed text reports a line") {
    auto text = replace(two_bus, R"("va_deg": -7.5,)", R"("va_deg": -7.5,,)");
    try {
      parse_case(text);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("unknown device kind") {
    CHECK_THROWS_AS(parse_case(replace(two_bus, "grid_forming", "flywheel")), ParseError);
  }
  SUBCASE("non-system inertia base") {
    CHECK_THROWS_AS(parse_case(replace(two_bus, R"("name": "two",)", R"("name": "two", "inertia_base": "machine",)")),
                    ParseError);
  }
}

TEST_CASE("validation rejects bad references and invariants") {
  CHECK_THROWS_AS(parse_case(replace(two_bus, R"({"from": 1, "to": 2)", R"({"from": 1, "to": 3)")), ReferenceError);
  CHECK_THROWS_AS(parse_case(replace(two_bus, R"("x": 0.25)", R"("x": -0.25)")), InvariantError);
  CHECK_THROWS_AS(parse_case(replace(two_bus, R"("id": 7)", R"("id": 1)")), InvariantError);
  CHECK_THROWS_AS(parse_case(replace(two_bus, R"("xd_prime": 0.3)", R"("xd_prime": 0.0)")), InvariantError);
}

TEST_CASE("disconnected networks need the relaxed option") {
  auto text = replace(two_bus, R"("branches": [{"from": 1, "to": 2, "x": 0.25, "r": 0.01}])",
                      R"("branches": [{"from": 1, "to": 2, "x": 0.25, "status": 0}])");
  CHECK_THROWS_AS(parse_case(text), InvariantError);
  ValidationOptions relaxed;
  relaxed.require_connected = false;
  auto grid = parse_case(text, relaxed);
  BusIndex index(grid);
  auto comp = bus_components(grid, index);
  CHECK(comp == std::vector<int>{0, 1});
}

TEST_CASE("serialize then parse is the identity") {
  for (auto name : testing::fixtures) {
    CAPTURE(name);
    auto grid = load_case(testing::case_path(name));
    auto once = serialize_case(grid);
    auto twice = serialize_case(parse_case(once));
    CHECK(once == twice);
  }
}

TEST_CASE("internal EMF matches the phasor relation") {
  auto snap = compute_internal_emf(parse_case(two_bus), "test");
  REQUIRE(snap.sources().size() == 2);
  for (const auto& s : snap.sources()) {
    const auto& bus = snap.grid().buses[s.bus_index];
    const std::complex<double> v = std::polar(bus.voltage_mag, bus.voltage_ang);
    const std::complex<double> e = v + std::complex<double>(0.0, s.reactance) * std::conj(std::complex(s.p, s.q) / v);
    CHECK(s.emf_mag == doctest::Approx(std::abs(e)).epsilon(1e-12));
    CHECK(s.internal_angle == doctest::Approx(std::arg(e)).epsilon(1e-12));
  }
  // Power through the coupling reactance reproduces the dispatch.
  const auto& m = snap.sources()[0];
  const auto& bus = snap.grid().buses[0];
  const double p = m.emf_mag * bus.voltage_mag * std::sin(m.internal_angle - bus.voltage_ang) / m.reactance;
  CHECK(p == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("zero terminal voltage is rejected") {
  auto grid = parse_case(two_bus);
  grid.buses[0].voltage_mag = 0.0;
  CHECK_THROWS_AS(compute_internal_emf(grid, "test"), InvariantError);
}

TEST_CASE("snapshots are immutable and keep provenance") {
  auto base = testing::fixture("wscc9");
  const auto digest0 = digest(base);
  const auto sources0 = base.sources().size();

  InertialDevice dev;
  dev.id = 50;
  dev.bus = BusId{8};
  dev.inertia_h = 2.0;
  dev.coupling_reactance = 0.15;
  auto with = attach_device(base, dev);

  CHECK(base.sources().size() == sources0);
  CHECK(digest(base) == digest0);
  CHECK(with.sources().size() == sources0 + 1);
  CHECK(with.history().size() == base.history().size() + 1);
  CHECK(with.provenance().find("attach_device(id=50") != std::string::npos);
  CHECK(digest(with) != digest0);

  auto back = detach_device(with, 50);
  CHECK(serialize_case(back.grid()) == serialize_case(base.grid()));
  CHECK(back.history().size() == base.history().size() + 2);

  CHECK_THROWS_AS(detach_device(base, 50), ReferenceError);
  dev.id = 1;
  CHECK_THROWS_AS(attach_device(base, dev), InvariantError);
  dev.id = 51;
  dev.bus = BusId{99};
  CHECK_THROWS_AS(attach_device(base, dev), ReferenceError);
}

TEST_CASE("branch scaling touches only the named corridor") {
  auto base = testing::fixture("ieee39");
  auto scaled = scale_branch_reactance(base, BusId{19}, BusId{16}, 2.0);
  for (std::size_t i = 0; i < base.grid().branches.size(); ++i) {
    const auto& a = base.grid().branches[i];
    const auto& b = scaled.grid().branches[i];
    const bool hit = (a.from == BusId{16} && a.to == BusId{19}) || (a.from == BusId{19} && a.to == BusId{16});
    CHECK(b.reactance == (hit ? 2.0 * a.reactance : a.reactance));
  }
  CHECK_THROWS_AS(scale_branch_reactance(base, BusId{1}, BusId{30}, 2.0), ReferenceError);
  CHECK_THROWS_AS(scale_branch_reactance(base, BusId{16}, BusId{19}, 0.0), InvariantError);
}

TEST_CASE("missing case file is a parse error") {
  CHECK_THROWS_AS(load_case("/nonexistent/case.json"), ParseError);
}
