#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace memsnn {

// Tabular dataset: numeric feature rows plus an integer class label taken
// from the final column.
struct TabularData {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<std::string> feature_names;  // empty when the file had no header
  size_t features() const { return x.empty() ? 0 : x.front().size(); }
  size_t size() const { return x.size(); }
  int num_classes() const;  // max label + 1
};

// Comma-separated values, optional single header line (detected by a
// non-numeric first field). Labels must be non-negative integers in the
// last column. Malformed input throws std::runtime_error naming the line.
TabularData load_csv(const std::string& path);

// Binary pixel grid with a class label.
struct Pattern {
  int label = -1;
  std::vector<uint8_t> bits;  // row-major, 1 = black
};

struct PatternSet {
  size_t rows = 0, cols = 0;
  std::vector<Pattern> patterns;
};

// Text format: "label: <int>" followed by `rows` lines of '0'/'1', blank
// line between patterns. All grids must share one shape.
PatternSet load_patterns(const std::string& path);

// Deterministic stratified split: per class, shuffle indices with the
// seeded generator and send ceil(train_fraction * count) to train.
std::pair<std::vector<size_t>, std::vector<size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, uint64_t seed);

}  // namespace memsnn
