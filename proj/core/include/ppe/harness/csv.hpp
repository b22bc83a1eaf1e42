#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ppe::harness {

struct CsvSchema {
  std::vector<std::string> features;
  std::string label;
  std::vector<double> label_values{0.0, 1.0};  // empty accepts any number
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> x;
  std::vector<double> y;

  std::size_t size() const { return y.size(); }
};

// Reads rows in file order. Throws std::runtime_error naming the offending
// row and column on missing columns, non-numeric cells or labels outside
// the declared domain.
Dataset ingest_csv(std::istream& in, const CsvSchema& schema);
Dataset ingest_csv(const std::string& path, const CsvSchema& schema);

// Deterministic Fisher-Yates permutation keyed by seed.
void shuffle(Dataset& data, std::uint64_t seed);

} // namespace ppe::harness
