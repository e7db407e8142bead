#pragma once

// Numerical thresholds shared by every module.
namespace gridinertia::tol {

inline constexpr double stochastic_sum = 1e-9;
inline constexpr double kron_pivot = 1e-12;
inline constexpr double qep_residual = 1e-8;
inline constexpr double pencil_orthonormal = 1e-8;
inline constexpr double zero_mode = 1e-9;
inline constexpr double kmeans_rel_change = 1e-8;
inline constexpr int kmeans_max_iter = 300;
inline constexpr int kmeans_restarts = 10;
inline constexpr int eigengap_max_modes = 12;
inline constexpr double min_terminal_voltage = 1e-6;
inline constexpr double sim_divergence = 1e3;
inline constexpr double default_dt = 1e-3;
inline constexpr double default_horizon = 10.0;
inline constexpr double max_horizon = 30.0;

}  // namespace gridinertia::tol
