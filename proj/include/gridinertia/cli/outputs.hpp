#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace gridinertia::cli {

// Writes provenance-stamped output files into one directory.
class OutputSink {
 public:
  OutputSink(std::filesystem::path dir, nlohmann::json meta, bool csv, bool json);

  void csv(const std::string& name, const std::string& body);
  void json(const std::string& name, nlohmann::json body);
  void text(const std::string& name, const std::string& comment_prefix, const std::string& body);

  const std::vector<std::filesystem::path>& written() const { return written_; }
  const nlohmann::json& meta() const { return meta_; }

 private:
  void put(const std::string& name, const std::string& content);
  std::string stamp() const;

  std::filesystem::path dir_;
  nlohmann::json meta_;
  bool csv_;
  bool json_;
  std::vector<std::filesystem::path> written_;
};

std::string number(double v);

}  // namespace gridinertia::cli
