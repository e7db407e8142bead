#include "gridinertia/sim/swing.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "gridinertia/error.hpp"

namespace gridinertia::sim {

Matrix ClassicalModel::state_matrix() const {
  const auto n = m.size();
  Matrix a = Matrix::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n) = omega_base * Matrix::Identity(n, n);
  a.bottomLeftCorner(n, n) = m.cwiseInverse().asDiagonal() * k_s;
  a.bottomRightCorner(n, n) = Matrix((-d.cwiseQuotient(m)).asDiagonal());
  return a;
}

ClassicalModel assemble_model(const model::Snapshot& snapshot, const inertia::Options& options) {
  const auto src = inertia::inertial_source_set(snapshot);
  if (src.size() == 0) throw ComputationError("no source with positive inertia");
  const auto net = inertia::augmented_network(snapshot);
  const auto na = static_cast<la::Index>(net.active.size());
  const auto m = static_cast<la::Index>(src.size());

  ClassicalModel out;
  out.source_ids = src.ids;
  out.bus_ids = snapshot.bus_ids();
  out.convention = options.convention;
  out.m = src.swing(options.convention);
  out.d = src.damping_d;
  out.omega_base = 2.0 * std::numbers::pi * snapshot.grid().system.frequency_hz;

  std::vector<la::Index> internal(static_cast<std::size_t>(m));
  std::iota(internal.begin(), internal.end(), na);
  const Matrix reduced = la::kron_reduce(net.y, internal);
  out.k_s = Matrix::Zero(m, m);
  for (la::Index i = 0; i < m; ++i) {
    for (la::Index k = 0; k < m; ++k) {
      if (i == k) continue;
      out.k_s(i, k) = src.emf(i) * src.emf(k) * (-reduced(i, k)) * std::cos(src.angle(i) - src.angle(k));
    }
    out.k_s(i, i) = -out.k_s.row(i).sum();
  }

  out.injection = inertia::build_spc(snapshot).matrix;
  out.divider = inertia::build_frequency_divider(snapshot).matrix;
  return out;
}

la::Index SimResult::onset_step() const {
  la::Index i = 0;
  while (i + 1 < time.size() && time(i) < t_start - 1e-12) ++i;
  return i;
}

Vector SimResult::initial_rocof() const {
  const auto i = onset_step();
  if (i + 1 >= time.size()) throw InvariantError("disturbance falls outside the simulated horizon");
  return (bus_frequency.row(i + 1) - bus_frequency.row(i)).transpose() / dt;
}

SimResult simulate_load_step(const ClassicalModel& model, const Disturbance& disturbance, const SimOptions& options) {
  if (!(options.dt > 0.0) || !(options.horizon > 0.0) || options.dt > options.horizon)
    throw InvariantError("need 0 < dt <= horizon");
  if (options.horizon > tol::max_horizon) throw InvariantError("horizon exceeds 30 s");
  if (!std::isfinite(disturbance.delta_p)) throw InvariantError("disturbance size must be finite");
  la::Index bus = -1;
  for (std::size_t i = 0; i < model.bus_ids.size(); ++i)
    if (model.bus_ids[i] == disturbance.bus) bus = static_cast<la::Index>(i);
  if (bus < 0) throw ReferenceError("unknown disturbance bus " + model::to_string(disturbance.bus));

  const auto n = model.m.size();
  const auto steps = static_cast<la::Index>(std::llround(options.horizon / options.dt));
  const Vector inv_m = model.m.cwiseInverse();
  const Vector s = model.injection.col(bus);

  auto power = [&](double t, const Vector& delta) -> Vector {
    const double u = t >= disturbance.t_start - 1e-12 ? disturbance.delta_p : 0.0;
    return -model.k_s * delta + s * u;
  };
  auto rhs = [&](double t, const Vector& x) -> Vector {
    Vector dx(2 * n);
    const auto delta = x.head(n);
    const auto w = x.tail(n);
    dx.head(n) = model.omega_base * w;
    dx.tail(n) = inv_m.cwiseProduct(-power(t, delta) - model.d.cwiseProduct(w));
    return dx;
  };

  SimResult out;
  out.bus_ids = model.bus_ids;
  out.source_ids = model.source_ids;
  out.dt = options.dt;
  out.t_start = disturbance.t_start;
  out.time.resize(steps + 1);
  out.rotor_speed.resize(steps + 1, n);
  out.rotor_angle.resize(steps + 1, n);
  out.electrical_power.resize(steps + 1, n);

  Vector x = Vector::Zero(2 * n);
  const double h = options.dt;
  for (la::Index i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * h;
    out.time(i) = t;
    out.rotor_angle.row(i) = x.head(n).transpose();
    out.rotor_speed.row(i) = x.tail(n).transpose();
    out.electrical_power.row(i) = (i == 0 ? Vector(Vector::Zero(n)) : power(t, x.head(n))).transpose();
    if (i == steps) break;
    const Vector k1 = rhs(t, x);
    const Vector k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.lpNorm<Eigen::Infinity>() > options.divergence)
      throw ComputationError("simulation diverged at t = " + std::to_string(t + h) + " s");
  }

  out.bus_frequency = out.rotor_speed * model.divider.transpose();
  out.bus_rocof.resize(steps + 1, out.bus_frequency.cols());
  for (la::Index i = 1; i <= steps; ++i)
    out.bus_rocof.row(i) = (out.bus_frequency.row(i) - out.bus_frequency.row(i - 1)) / h;
  out.bus_rocof.row(0) = steps > 0 ? out.bus_rocof.row(1) : out.bus_rocof.row(0).setZero();
  return out;
}

Vector regional_average_frequency(const SimResult& result, const partition::PartitionResult& regions, int region) {
  if (regions.bus_ids != result.bus_ids) throw InvariantError("partition and simulation cover different buses");
  const auto members = regions.members(region);
  if (members.empty()) throw ReferenceError("region " + std::to_string(region + 1) + " has no members");
  Vector avg = Vector::Zero(result.time.size());
  for (auto i : members) avg += result.bus_frequency.col(static_cast<la::Index>(i));
  return avg / static_cast<double>(members.size());
}

}  // namespace gridinertia::sim
