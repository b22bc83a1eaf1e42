#include "ppe/harness/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string_view>

#include "ppe/rng.hpp"

namespace ppe::harness {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_cell(std::string_view cell, std::size_t row, std::string_view column) {
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc{} || ptr != end) {
    throw std::runtime_error("row " + std::to_string(row) + ", column '" + std::string(column) +
                             "': non-numeric cell '" + std::string(cell) + "'");
  }
  return v;
}

} // namespace

Dataset ingest_csv(std::istream& in, const CsvSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header row");
  const auto header = split(line);
  const auto locate = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> feature_idx;
  for (const auto& f : schema.features) feature_idx.push_back(locate(f));
  const std::size_t label_idx = locate(schema.label);

  Dataset data;
  data.feature_names = schema.features;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("row " + std::to_string(row) + ": expected " + std::to_string(header.size()) +
                               " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> x;
    x.reserve(feature_idx.size());
    for (std::size_t j = 0; j < feature_idx.size(); ++j) {
      x.push_back(parse_cell(cells[feature_idx[j]], row, schema.features[j]));
    }
    const double y = parse_cell(cells[label_idx], row, schema.label);
    if (!schema.label_values.empty() &&
        std::find(schema.label_values.begin(), schema.label_values.end(), y) == schema.label_values.end()) {
      throw std::runtime_error("row " + std::to_string(row) + ", column '" + schema.label +
                               "': label outside the declared domain");
    }
    data.x.push_back(std::move(x));
    data.y.push_back(y);
  }
  return data;
}

Dataset ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return ingest_csv(in, schema);
}

void shuffle(Dataset& data, std::uint64_t seed) {
  CounterRng rng(seed, "shuffle");
  for (std::size_t i = data.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng() % i);
    std::swap(data.x[i - 1], data.x[j]);
    std::swap(data.y[i - 1], data.y[j]);
  }
}

} // namespace ppe::harness
