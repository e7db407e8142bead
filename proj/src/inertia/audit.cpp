#include "gridinertia/inertia/audit.hpp"

#include <sstream>

namespace gridinertia::inertia {

nlohmann::json matrix_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (la::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (la::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

nlohmann::json vector_json(const Vector& v, const std::vector<bool>* mask = nullptr) {
  auto out = nlohmann::json::array();
  for (la::Index i = 0; i < v.size(); ++i) {
    if (mask && !(*mask)[static_cast<std::size_t>(i)])
      out.push_back(nullptr);
    else
      out.push_back(v(i));
  }
  return out;
}

}  // namespace

std::string profile_csv(const InertiaProfile& p) {
  std::ostringstream os;
  os.precision(10);
  os << "bus_id,h_seconds\n";
  for (std::size_t i = 0; i < p.bus_ids.size(); ++i) {
    os << p.bus_ids[i].value << ',';
    if (p.present[i]) os << p.h(static_cast<la::Index>(i));
    os << '\n';
  }
  return os.str();
}

nlohmann::json profile_audit(const InertiaProfile& p) {
  nlohmann::json j;
  auto buses = nlohmann::json::array();
  for (auto id : p.bus_ids) buses.push_back(id.value);
  j["buses"] = buses;
  j["sources"] = p.source_ids;
  j["convention"] = std::string(to_string(p.convention));
  j["M"] = vector_json(p.source_m);
  j["D"] = vector_json(p.source_d);
  j["D_div"] = matrix_json(p.divider.matrix);
  j["delta_S"] = matrix_json(p.spc.matrix);
  j["B_equiv"] = matrix_json(p.spc.equivalent_susceptance);
  j["K"] = matrix_json(p.k);
  j["K_h"] = vector_json(p.k_h);
  j["F"] = matrix_json(p.f);
  j["F_h"] = vector_json(p.f_h);
  j["R"] = vector_json(p.r.diagonal());
  j["h"] = vector_json(p.h, &p.present);
  return j;
}

}  // namespace gridinertia::inertia
