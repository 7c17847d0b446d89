#include "memsnn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "memsnn/rng.hpp"

namespace memsnn {
namespace {

[[noreturn]] void fail(const std::string& path, size_t line,
                       const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double* out) {
  try {
    size_t pos = 0;
    *out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int TabularData::num_classes() const {
  int hi = -1;
  for (int v : y) hi = std::max(hi, v);
  return hi + 1;
}

TabularData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  TabularData d;
  std::string line;
  size_t lineno = 0;
  size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_commas(line);
    if (fields.size() < 2) fail(path, lineno, "need at least one feature and a label");
    double probe;
    if (first && !parse_double(fields.front(), &probe)) {
      d.feature_names.assign(fields.begin(), fields.end() - 1);
      width = fields.size();
      first = false;
      continue;
    }
    first = false;
    if (width == 0) width = fields.size();
    if (fields.size() != width)
      fail(path, lineno, "expected " + std::to_string(width) + " fields, got " +
                             std::to_string(fields.size()));
    std::vector<double> row(fields.size() - 1);
    for (size_t i = 0; i + 1 < fields.size(); ++i) {
      if (!parse_double(fields[i], &row[i]) || !std::isfinite(row[i]))
        fail(path, lineno, "bad numeric field '" + fields[i] + "'");
    }
    double lab;
    if (!parse_double(fields.back(), &lab) || lab != std::floor(lab) || lab < 0)
      fail(path, lineno, "label must be a non-negative integer, got '" +
                             fields.back() + "'");
    d.x.push_back(std::move(row));
    d.y.push_back(static_cast<int>(lab));
  }
  if (d.x.empty()) throw std::runtime_error(path + ": no data rows");
  return d;
}

PatternSet load_patterns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  PatternSet set;
  std::string line;
  size_t lineno = 0;
  Pattern cur;
  size_t cur_rows = 0;
  bool open = false;
  auto flush = [&]() {
    if (!open) return;
    if (set.rows == 0) {
      set.rows = cur_rows;
    } else if (cur_rows != set.rows) {
      fail(path, lineno, "pattern has " + std::to_string(cur_rows) +
                             " rows, expected " + std::to_string(set.rows));
    }
    set.patterns.push_back(std::move(cur));
    cur = Pattern{};
    cur_rows = 0;
    open = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("label:", 0) == 0) {
      flush();
      double lab;
      if (!parse_double(line.substr(6), &lab) || lab != std::floor(lab) || lab < 0)
        fail(path, lineno, "bad label line '" + line + "'");
      cur.label = static_cast<int>(lab);
      open = true;
      continue;
    }
    if (!open) fail(path, lineno, "grid row before any 'label:' line");
    if (set.cols == 0 && cur_rows == 0 && set.patterns.empty())
      set.cols = line.size();
    if (line.size() != set.cols)
      fail(path, lineno, "row width " + std::to_string(line.size()) +
                             ", expected " + std::to_string(set.cols));
    for (char c : line) {
      if (c != '0' && c != '1') fail(path, lineno, "pixels must be '0' or '1'");
      cur.bits.push_back(c == '1' ? 1 : 0);
    }
    ++cur_rows;
  }
  ++lineno;
  flush();
  if (set.patterns.empty()) throw std::runtime_error(path + ": no patterns");
  return set;
}

std::pair<std::vector<size_t>, std::vector<size_t>> stratified_split(
    const std::vector<int>& labels, double train_fraction, uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("stratified_split: fraction must be in (0, 1)");
  int hi = -1;
  for (int v : labels) {
    if (v < 0) throw std::invalid_argument("stratified_split: negative label");
    hi = std::max(hi, v);
  }
  std::vector<std::vector<size_t>> per_class(static_cast<size_t>(hi) + 1);
  for (size_t i = 0; i < labels.size(); ++i)
    per_class[static_cast<size_t>(labels[i])].push_back(i);
  std::vector<size_t> train_idx, test_idx;
  for (size_t c = 0; c < per_class.size(); ++c) {
    auto& idx = per_class[c];
    if (idx.empty()) continue;
    std::mt19937_64 rng =
        derive_stream(seed, "split/class/" + std::to_string(c));
    std::shuffle(idx.begin(), idx.end(), rng);
    const size_t k = static_cast<size_t>(
        std::ceil(train_fraction * static_cast<double>(idx.size())));
    for (size_t i = 0; i < idx.size(); ++i)
      (i < k ? train_idx : test_idx).push_back(idx[i]);
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());
  return {train_idx, test_idx};
}

}  // namespace memsnn
