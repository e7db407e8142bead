#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "gridinertia/model/grid_case.hpp"
#include "gridinertia/model/snapshot.hpp"

namespace gridinertia::model {

GridCase parse_case(std::string_view text, const ValidationOptions& options = {});
GridCase load_case(const std::filesystem::path& path, const ValidationOptions& options = {});
std::string serialize_case(const GridCase& grid);

// load_case followed by compute_internal_emf, with the file path as provenance.
Snapshot load_snapshot(const std::filesystem::path& path, const ValidationOptions& options = {});

}  // namespace gridinertia::model
