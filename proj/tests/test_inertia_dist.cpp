#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "gridinertia/error.hpp"
#include "gridinertia/inertia/audit.hpp"
#include "gridinertia/inertia/inertia.hpp"
#include "gridinertia/model/case_io.hpp"
#include "support.hpp"

using namespace gridinertia;
using namespace gridinertia::inertia;
using la::Index;

namespace {

// Bus susceptance matrix with source reactances added at their terminals, plus the source coupling block.
struct Network {
  Matrix b_bus;     // n x n, including 1/x at terminals
  Matrix g;         // n x m
  Vector emf, angle, h;
};

Network assemble(const model::Snapshot& snap) {
  const auto n = static_cast<Index>(snap.bus_count());
  Network net;
  net.b_bus = Matrix::Zero(n, n);
  for (const auto& br : snap.grid().branches) {
    if (!br.in_service) continue;
    const auto a = static_cast<Index>(snap.index().at(br.from));
    const auto b = static_cast<Index>(snap.index().at(br.to));
    net.b_bus(a, b) -= 1.0 / br.reactance;
    net.b_bus(b, a) -= 1.0 / br.reactance;
    net.b_bus(a, a) += 1.0 / br.reactance;
    net.b_bus(b, b) += 1.0 / br.reactance;
  }
  const auto src = snap.inertial_sources();
  const auto m = static_cast<Index>(src.size());
  net.g = Matrix::Zero(n, m);
  net.emf.resize(m);
  net.angle.resize(m);
  net.h.resize(m);
  for (Index k = 0; k < m; ++k) {
    const auto& s = src[static_cast<std::size_t>(k)];
    const auto i = static_cast<Index>(s.bus_index);
    net.b_bus(i, i) += 1.0 / s.reactance;
    net.g(i, k) = 1.0 / s.reactance;
    net.emf(k) = s.emf_mag;
    net.angle(k) = s.internal_angle;
    net.h(k) = s.inertia_h;
  }
  return net;
}

// Transfer susceptance from internal node k to bus j with every other internal node grounded:
// drive node k at unit voltage and read the current drawn into grounded bus j.
Matrix transfer_susceptance(const Network& net) {
  const auto n = net.b_bus.rows();
  const auto m = net.g.cols();
  Matrix t(m, n);
  for (Index j = 0; j < n; ++j) {
    std::vector<Index> free;
    for (Index i = 0; i < n; ++i)
      if (i != j) free.push_back(i);
    const auto f = static_cast<Index>(free.size());
    Matrix a(f, f);
    for (Index p = 0; p < f; ++p)
      for (Index q = 0; q < f; ++q) a(p, q) = net.b_bus(free[p], free[q]);
    Eigen::FullPivLU<Matrix> lu(a);
    for (Index k = 0; k < m; ++k) {
      Vector rhs(f);
      for (Index p = 0; p < f; ++p) rhs(p) = net.g(free[p], k);
      const Vector v = lu.solve(rhs);
      double current = net.g(j, k);
      for (Index p = 0; p < f; ++p) current -= net.b_bus(j, free[p]) * v(p);
      t(k, j) = current;
    }
  }
  return t;
}

const char* const islands = R"({
  "system": {"name": "islands"},
  "buses": [
    {"id": 1, "vm": 1.0, "va_deg": 0.0},
    {"id": 2, "vm": 1.0, "va_deg": -3.0, "p_load": 0.4},
    {"id": 3, "vm": 1.0, "va_deg": 0.0},
    {"id": 4, "vm": 1.0, "va_deg": 0.0}
  ],
  "branches": [{"from": 1, "to": 2, "x": 0.1}, {"from": 3, "to": 4, "x": 0.1}],
  "machines": [{"id": 1, "bus": 1, "H": 4.0, "D": 2.0, "xd_prime": 0.2, "p_gen": 0.4}]
})";

}  // namespace

TEST_CASE("frequency divider matches an independent assembly") {
  for (auto name : testing::fixtures) {
    CAPTURE(name);
    auto snap = testing::fixture(name);
    auto net = assemble(snap);
    Matrix expect = net.b_bus.fullPivLu().solve(net.g);
    auto div = build_frequency_divider(snap);
    CHECK((div.matrix - expect).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((div.matrix.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("power shares match an independent transfer-susceptance oracle") {
  for (auto name : testing::fixtures) {
    CAPTURE(name);
    auto snap = testing::fixture(name);
    auto net = assemble(snap);
    Matrix t = transfer_susceptance(net);
    auto spc = build_spc(snap);
    CHECK((spc.equivalent_susceptance - t).cwiseAbs().maxCoeff() < 1e-8 * t.cwiseAbs().maxCoeff());

    const auto n = static_cast<Index>(snap.bus_count());
    for (Index j = 0; j < n; ++j) {
      const auto& bus = snap.grid().buses[static_cast<std::size_t>(j)];
      Vector k(t.rows());
      for (Index s = 0; s < t.rows(); ++s)
        k(s) = net.emf(s) * bus.voltage_mag * t(s, j) * std::cos(net.angle(s) - bus.voltage_ang);
      const Vector share = k / k.sum();
      CHECK((spc.matrix.col(j) - share).cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK((spc.matrix.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("nodal inertia equals the harmonic form of its ingredients") {
  for (auto name : testing::fixtures) {
    CAPTURE(name);
    auto snap = testing::fixture(name);
    auto prof = nodal_inertia(snap);
    Vector direct = nodal_inertia_scalar(prof.divider, prof.spc, prof.source_m);
    CHECK(((prof.h - direct).array() / direct.array()).abs().maxCoeff() < 1e-12);
    CHECK(prof.h.minCoeff() > 0.0);
    CHECK(std::all_of(prof.present.begin(), prof.present.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("a lone machine gives every bus its inertia") {
  auto snap = model::compute_internal_emf(model::parse_case(testing::single_machine_case(6.5, 1.5)), "single");
  auto default_profile = nodal_inertia(snap);
  auto classical = nodal_inertia(snap, {InertiaConvention::classical});
  for (Index j = 0; j < 2; ++j) {
    CHECK(default_profile.h(j) == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(classical.h(j) == doctest::Approx(13.0).epsilon(1e-12));
    CHECK(default_profile.r(j, j) == doctest::Approx(1.5 / 6.5).epsilon(1e-12));
    CHECK(classical.r(j, j) == doctest::Approx(1.5 / 13.0).epsilon(1e-12));
  }
}

TEST_CASE("nodal inertia ignores damping") {
  auto grid = model::load_case(testing::case_path("ieee68"));
  auto base = nodal_inertia(model::compute_internal_emf(grid, "base"));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> scale(0.0, 10.0);
  for (auto& m : grid.machines) m.damping_d = m.damping_d * scale(rng) + scale(rng);
  auto damped = nodal_inertia(model::compute_internal_emf(grid, "damped"));
  CHECK((base.h - damped.h).cwiseAbs().maxCoeff() <= 1e-12 * base.h.cwiseAbs().maxCoeff());
  CHECK((base.r - damped.r).norm() > 0.0);
}

TEST_CASE("damping distribution is diagonal, nonnegative and monotone in D") {
  auto grid = model::load_case(testing::case_path("ieee68"));
  auto prof = nodal_inertia(model::compute_internal_emf(grid, "base"));
  Matrix off = prof.r;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  CHECK(prof.r.diagonal().minCoeff() >= 0.0);

  grid.machines[3].damping_d += 5.0;
  auto more = damping_distribution(model::compute_internal_emf(grid, "more"));
  CHECK(((more.diagonal() - prof.r.diagonal()).array() >= -1e-15).all());
  CHECK((more.diagonal() - prof.r.diagonal()).maxCoeff() > 0.0);
}

TEST_CASE("grid-forming droop raises damping at fixed inertia") {
  auto snap = testing::fixture("ieee39");
  double last = -1.0;
  for (double mp : {0.2, 0.1, 0.05}) {
    auto dev = model::InertialDevice::grid_forming(100, model::BusId{4}, 1.0, mp, 0.1);
    dev.inertia_h = 10.0;
    auto r = damping_distribution(model::attach_device(snap, dev));
    const double r4 = r(3, 3);
    CHECK(r4 > last);
    last = r4;
  }
}

TEST_CASE("buses without an inertial path are reported absent") {
  model::ValidationOptions relaxed;
  relaxed.require_connected = false;
  auto snap = model::compute_internal_emf(model::parse_case(islands, relaxed), "islands");
  auto prof = nodal_inertia(snap);
  CHECK(prof.present == std::vector<bool>{true, true, false, false});
  CHECK(prof.h(0) == doctest::Approx(4.0));
  CHECK(std::isnan(prof.h(2)));
  CHECK(prof.at(model::BusId{1}).value() == doctest::Approx(4.0));
  CHECK_FALSE(prof.at(model::BusId{3}).has_value());
  CHECK(prof.divider.matrix.row(2).norm() == 0.0);

  auto csv = profile_csv(prof);
  CHECK(csv.find("\n3,\n") != std::string::npos);
  auto audit = profile_audit(prof);
  CHECK(audit["h"][2].is_null());
}

TEST_CASE("39-bus generator buses carry less inertia than the large equivalent") {
  auto prof = nodal_inertia(testing::fixture("ieee39"));
  auto h39 = prof.at(model::BusId{39}).value();
  for (int bus = 30; bus <= 38; ++bus) CHECK(prof.at(model::BusId{bus}).value() < h39);
}
