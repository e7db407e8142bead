#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "gridinertia/error.hpp"
#include "gridinertia/la/eigen.hpp"
#include "gridinertia/model/case_io.hpp"
#include "gridinertia/sim/swing.hpp"
#include "support.hpp"

using namespace gridinertia;
using namespace gridinertia::sim;
using la::Index;
using model::BusId;

TEST_CASE("a lone machine ramps linearly") {
  auto snap = model::compute_internal_emf(model::parse_case(testing::single_machine_case(5.0)), "single");
  for (auto conv : {inertia::InertiaConvention::starting_time, inertia::InertiaConvention::classical}) {
    auto model = assemble_model(snap, {conv});
    const double m = inertia::swing_coefficient(5.0, conv);
    SimOptions opt;
    opt.horizon = 2.0;
    auto res = simulate_load_step(model, {BusId{2}, 0.1, 0.0}, opt);
    for (Index i = 0; i < res.time.size(); i += 250) {
      CHECK(res.rotor_speed(i, 0) == doctest::Approx(-0.1 * res.time(i) / m).epsilon(1e-9));
      CHECK(res.bus_frequency(i, 1) == doctest::Approx(res.rotor_speed(i, 0)).epsilon(1e-12));
    }
  }
  // The classical form gives the textbook ramp -dP t / (2H).
  auto model = assemble_model(snap, {inertia::InertiaConvention::classical});
  SimOptions one_second;
  one_second.horizon = 1.0;
  auto res = simulate_load_step(model, {BusId{1}, 1.0, 0.0}, one_second);
  CHECK(res.rotor_speed(1000, 0) == doctest::Approx(-1.0 / 10.0).epsilon(1e-9));
}

TEST_CASE("initial RoCoF reproduces nodal inertia at random buses") {
  std::mt19937_64 rng(2024);
  for (auto name : testing::fixtures) {
    CAPTURE(name);
    auto snap = testing::fixture(name);
    auto prof = inertia::nodal_inertia(snap);
    auto model = assemble_model(snap);
    std::uniform_int_distribution<std::size_t> pick(0, snap.bus_count() - 1);
    SimOptions opt;
    opt.horizon = 0.05;
    for (int trial = 0; trial < 10; ++trial) {
      const auto j = pick(rng);
      const double dp = 0.01;
      auto res = simulate_load_step(model, {snap.grid().buses[j].id, dp, 0.0}, opt);
      const double rocof = res.initial_rocof()(static_cast<Index>(j));
      CAPTURE(j);
      CHECK(std::abs(-prof.h(static_cast<Index>(j)) * rocof / dp - 1.0) < 0.01);
    }
  }
}

TEST_CASE("undamped motion conserves the center-of-inertia momentum") {
  for (auto name : {"wscc9", "ieee39"}) {
    CAPTURE(name);
    auto snap = testing::fixture(name);
    auto model = assemble_model(snap);
    REQUIRE(model.d.cwiseAbs().maxCoeff() == 0.0);
    SimOptions opt;
    opt.horizon = 3.0;
    auto res = simulate_load_step(model, {snap.grid().buses[3].id, 0.2, 0.0}, opt);
    for (Index i = 0; i < res.time.size(); i += 100) {
      const double momentum = res.rotor_speed.row(i).dot(model.m);
      const double expect = -0.2 * res.time(i);
      CHECK(std::abs(momentum - expect) <= 1e-3 * std::max(std::abs(expect), 1e-6));
    }
  }
}

TEST_CASE("halving the step leaves the trajectory unchanged") {
  auto snap = testing::fixture("ieee68");
  auto model = assemble_model(snap);
  SimOptions coarse, fine;
  coarse.horizon = fine.horizon = 2.0;
  coarse.dt = 2e-3;
  fine.dt = 1e-3;
  auto a = simulate_load_step(model, {BusId{20}, 0.5, 0.0}, coarse);
  auto b = simulate_load_step(model, {BusId{20}, 0.5, 0.0}, fine);
  const double scale = a.bus_frequency.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (Index i = 0; i < a.time.size(); ++i)
    worst = std::max(worst, (a.bus_frequency.row(i) - b.bus_frequency.row(2 * i)).cwiseAbs().maxCoeff());
  CHECK(worst < 1e-6 * scale);
}

TEST_CASE("state matrix eigenvalues match the swing quadratic") {
  for (auto name : {"wscc9", "ieee68"}) {
    CAPTURE(name);
    auto model = assemble_model(testing::fixture(name));
    const Matrix n = (model.m / model.omega_base).asDiagonal();
    const Matrix r = (model.d / model.omega_base).asDiagonal();
    auto pairs = la::eig_qep(n, r, -model.k_s);
    Eigen::EigenSolver<Matrix> es(model.state_matrix());
    std::vector<std::complex<double>> lam(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    REQUIRE(lam.size() == pairs.size());
    for (const auto& p : pairs) {
      double best = INFINITY;
      for (auto l : lam) best = std::min(best, std::abs(l - p.value));
      CHECK(best <= 1e-6 * std::max(1.0, std::abs(p.value)));
    }
    // Stable; the defective rigid-body root only smears to about sqrt(eps).
    for (auto l : lam) CHECK(l.real() <= 1e-6);
  }
}

TEST_CASE("zero disturbance leaves everything flat") {
  auto snap = testing::fixture("ieee39");
  auto res = simulate_load_step(assemble_model(snap), {BusId{16}, 0.0, 0.0}, {});
  CHECK(res.bus_frequency.cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.rotor_angle.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear response scales with the step") {
  auto model = assemble_model(testing::fixture("wscc9"));
  SimOptions opt;
  opt.horizon = 1.0;
  auto a = simulate_load_step(model, {BusId{5}, 0.1, 0.0}, opt);
  auto b = simulate_load_step(model, {BusId{5}, 0.3, 0.0}, opt);
  CHECK((3.0 * a.bus_frequency - b.bus_frequency).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("a light device near the bus worsens its initial RoCoF") {
  auto snap = testing::fixture("wscc9");
  model::InertialDevice dev;
  dev.id = 10;
  dev.bus = BusId{8};
  dev.inertia_h = 1.0;
  dev.coupling_reactance = 0.15;
  SimOptions opt;
  opt.horizon = 0.1;
  const Disturbance step{BusId{4}, 1.0, 0.0};
  const double base = simulate_load_step(assemble_model(snap), step, opt).initial_rocof()(7);
  const double light = simulate_load_step(assemble_model(model::attach_device(snap, dev)), step, opt).initial_rocof()(7);
  CHECK(std::abs(light) > std::abs(base));
}

TEST_CASE("buses in one coherent region swing together") {
  auto snap = testing::fixture("ieee39");
  auto prof = inertia::nodal_inertia(snap);
  auto part = partition::partition(snap, prof);
  SimOptions opt;
  opt.horizon = 5.0;
  auto res = simulate_load_step(assemble_model(snap), {BusId{16}, 1.0, 0.0}, opt);
  for (int reg = 0; reg < part.r; ++reg) {
    auto avg = regional_average_frequency(res, part, reg);
    auto members = part.members(reg);
    Vector direct = Vector::Zero(res.time.size());
    for (auto i : members) direct += res.bus_frequency.col(static_cast<Index>(i));
    direct /= static_cast<double>(members.size());
    CHECK((avg - direct).cwiseAbs().maxCoeff() < 1e-15);
    // Each member stays within a fraction of the overall excursion of its regional mean.
    double spread = 0.0;
    for (auto i : members) spread = std::max(spread, (res.bus_frequency.col(static_cast<Index>(i)) - avg).cwiseAbs().maxCoeff());
    CHECK(spread < 0.5 * avg.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("invalid runs are rejected") {
  auto model = assemble_model(testing::fixture("wscc9"));
  SimOptions opt;
  opt.horizon = 40.0;
  CHECK_THROWS_AS(simulate_load_step(model, {BusId{5}, 0.1, 0.0}, opt), InvariantError);
  opt.horizon = 1.0;
  CHECK_THROWS_AS(simulate_load_step(model, {BusId{42}, 0.1, 0.0}, opt), ReferenceError);
  auto res = simulate_load_step(model, {BusId{5}, 0.1, 2.0}, opt);
  CHECK_THROWS_AS(res.initial_rocof(), InvariantError);
  opt.divergence = 1e-9;
  CHECK_THROWS_AS(simulate_load_step(model, {BusId{5}, 1.0, 0.0}, opt), ComputationError);
}
