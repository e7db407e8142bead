#include "gridinertia/cli/outputs.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gridinertia/error.hpp"

namespace gridinertia::cli {

std::string number(double v) {
  if (!std::isfinite(v)) return "";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

OutputSink::OutputSink(std::filesystem::path dir, nlohmann::json meta, bool csv, bool json)
    : dir_(std::move(dir)), meta_(std::move(meta)), csv_(csv), json_(json) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_))
    throw InputError("cannot create output directory '" + dir_.string() + "'");
}

std::string OutputSink::stamp() const {
  return "gridinertia " + meta_.at("toolkit_version").get<std::string>() +
         " config=" + meta_.at("config_digest").get<std::string>() +
         " case=" + meta_.at("case_digest").get<std::string>();
}

void OutputSink::put(const std::string& name, const std::string& content) {
  const auto path = dir_ / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
  written_.push_back(path);
}

void OutputSink::csv(const std::string& name, const std::string& body) {
  if (csv_) put(name, "# " + stamp() + "\n" + body);
}

void OutputSink::json(const std::string& name, nlohmann::json body) {
  if (!json_) return;
  body["meta"] = meta_;
  put(name, body.dump(1) + "\n");
}

void OutputSink::text(const std::string& name, const std::string& comment_prefix, const std::string& body) {
  if (csv_) put(name, comment_prefix + " " + stamp() + "\n" + body);
}

}  // namespace gridinertia::cli
