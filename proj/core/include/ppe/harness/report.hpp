#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ppe/confseq.hpp"
#include "ppe/harness/config.hpp"

namespace ppe::harness {

inline constexpr int kReportVersion = 1;

using Json = nlohmann::ordered_json;

// Common header of every JSON summary: version, case, seed, config hash and
// the resolved configuration.
Json run_header(const StreamConfig& config);

void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& doc);

// Columns n,<name_1>,...,<name_k>; column j holds exp(traces[j][i]).
std::string trajectory_csv(const std::vector<std::string>& names,
                           const std::vector<std::vector<double>>& log_traces);

std::string landscape_csv(const ThetaGrid& grid, const PLandscape& landscape);

// Smallest and largest grid point of a set, null when empty.
Json set_summary(const ThetaGrid& grid, const GridSet& set);

std::filesystem::path replica_dir(const StreamConfig& config, std::size_t replica);

} // namespace ppe::harness
