#include "ppe/harness/report.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ppe::harness {

Json run_header(const StreamConfig& config) {
  Json kv = Json::object();
  std::istringstream in(config.canonical_text());
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  Json doc;
  doc["version"] = kReportVersion;
  doc["case"] = case_name(config.case_id);
  doc["seed"] = config.seed;
  doc["config_hash"] = config.hash();
  doc["config"] = kv;
  return doc;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(2) + "\n"); }

std::string trajectory_csv(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& log_traces) {
  if (names.size() != log_traces.size()) throw std::invalid_argument("trajectory name/column mismatch");
  std::string out = "n";
  for (const auto& name : names) out += "," + name;
  out += '\n';
  const std::size_t rows = log_traces.empty() ? 0 : log_traces.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    out += std::to_string(i + 1);
    for (const auto& col : log_traces) out += "," + format_double(std::exp(col.at(i)));
    out += '\n';
  }
  return out;
}

std::string landscape_csv(const ThetaGrid& grid, const PLandscape& landscape) {
  std::ostringstream os;
  write_landscape_csv(os, grid, landscape);
  return os.str();
}

Json set_summary(const ThetaGrid& grid, const GridSet& set) {
  Json out;
  std::size_t count = 0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (!set[k]) continue;
    if (count == 0) lo = grid.points()[k];
    hi = grid.points()[k];
    ++count;
  }
  out["size"] = count;
  out["lower"] = count ? Json(lo) : Json(nullptr);
  out["upper"] = count ? Json(hi) : Json(nullptr);
  return out;
}

std::filesystem::path replica_dir(const StreamConfig& config, std::size_t replica) {
  std::filesystem::path dir(config.out_dir);
  if (config.replicas > 1) dir /= "replica_" + std::to_string(replica);
  return dir;
}

} // namespace ppe::harness
