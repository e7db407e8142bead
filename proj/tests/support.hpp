#pragma once

#include <filesystem>
#include <string>

#include "gridinertia/model/case_io.hpp"

namespace testing {

inline std::filesystem::path case_path(const std::string& name) {
  return std::filesystem::path(GRIDINERTIA_CASE_DIR) / (name + ".json");
}

inline gridinertia::model::Snapshot fixture(const std::string& name) {
  return gridinertia::model::load_snapshot(case_path(name));
}

inline const char* const fixtures[] = {"wscc9", "ieee39", "ieee68", "ieee68_gfl", "ieee68_gfm"};

// One machine feeding one load bus over a single line.
inline std::string single_machine_case(double h, double d = 0.0) {
  return R"({"system": {"name": "single", "frequency_hz": 50.0},
    "buses": [{"id": 1, "vm": 1.0, "va_deg": 0.0}, {"id": 2, "vm": 0.98, "va_deg": -5.0, "p_load": 0.5}],
    "branches": [{"from": 1, "to": 2, "x": 0.2}],
    "machines": [{"id": 1, "bus": 1, "H": )" +
         std::to_string(h) + R"(, "D": )" + std::to_string(d) + R"(, "xd_prime": 0.3, "p_gen": 0.5, "q_gen": 0.1}]})";
}

}  // namespace testing
