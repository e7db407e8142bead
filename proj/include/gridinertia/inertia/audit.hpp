#pragma once

#include <string>

#include "json.hpp"

#include "gridinertia/inertia/inertia.hpp"

namespace gridinertia::inertia {

// bus_id,h_seconds with an empty value for buses without an inertial path.
std::string profile_csv(const InertiaProfile& profile);
nlohmann::json profile_audit(const InertiaProfile& profile);

nlohmann::json matrix_json(const Matrix& m);

}  // namespace gridinertia::inertia
