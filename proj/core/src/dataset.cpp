#include "cobs/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cobs/error.hpp"
#include "cobs/random.hpp"

namespace cobs {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool is_missing(std::string_view cell) {
  return cell.empty() || cell == "?" || cell == "NA" || cell == "NaN" || cell == "nan";
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<long> parse_index(std::string_view s) {
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::size_t Dataset::class_count() const {
  if (!labels) return 0;
  return std::set<int>(labels->begin(), labels->end()).size();
}

Dataset parse_dataset(std::string_view text, const CsvOptions& options) {
  std::vector<std::vector<std::string_view>> rows;
  std::vector<std::size_t> line_numbers;
  std::size_t line_no = 0;
  for (std::size_t pos = 0; pos <= text.size();) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const auto line = text.substr(pos, end - pos);
    if (!trim(line).empty()) {
      rows.push_back(split_cells(line));
      line_numbers.push_back(line_no);
    }
    pos = end + 1;
  }
  if (rows.empty()) throw InvalidInput("empty dataset");

  const std::size_t columns = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns) {
      throw InvalidInput("line " + std::to_string(line_numbers[r]) + ": expected " +
                         std::to_string(columns) + " columns, found " +
                         std::to_string(rows[r].size()));
    }
  }

  // Header detection: the first row is a header unless every non-label
  // cell is numeric or missing. Resolve a numeric label index first so a
  // textual class column does not look like a header.
  std::optional<std::size_t> label_col;
  std::optional<std::string> label_name;
  if (options.label_column) {
    if (auto idx = parse_index(*options.label_column)) {
      const long c = static_cast<long>(columns);
      const long resolved = *idx < 0 ? c + *idx : *idx;
      if (resolved < 0 || resolved >= c) {
        throw InvalidInput("label column " + *options.label_column + " out of range");
      }
      label_col = static_cast<std::size_t>(resolved);
    } else {
      label_name = *options.label_column;
    }
  }

  bool has_header = false;
  for (std::size_t c = 0; c < columns; ++c) {
    if (label_col && c == *label_col) continue;
    const auto cell = rows.front()[c];
    if (!is_missing(cell) && !parse_number(cell)) {
      has_header = true;
      break;
    }
  }
  if (label_name) {
    if (!has_header) throw InvalidInput("label column '" + *label_name + "' needs a header row");
    const auto& header = rows.front();
    const auto it = std::find(header.begin(), header.end(), std::string_view(*label_name));
    if (it == header.end()) throw InvalidInput("label column '" + *label_name + "' not found");
    label_col = static_cast<std::size_t>(it - header.begin());
  }
  if (label_col && columns < 2) throw InvalidInput("no feature columns");

  Dataset d;
  d.name = options.name;
  for (std::size_t c = 0; c < columns; ++c) {
    if (label_col && c == *label_col) continue;
    d.feature_names.push_back(has_header ? std::string(rows.front()[c])
                                         : "x" + std::to_string(d.feature_names.size()));
  }
  const std::size_t f = d.feature_names.size();

  std::vector<double> values;
  std::vector<int> labels;
  std::map<std::string, int, std::less<>> class_ids;
  std::set<std::vector<double>> seen;
  std::vector<double> row(f);
  std::size_t kept = 0;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    bool missing = false;
    std::size_t fi = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (label_col && c == *label_col) {
        if (is_missing(cells[c])) missing = true;
        continue;
      }
      if (is_missing(cells[c])) {
        missing = true;
        ++fi;
        continue;
      }
      const auto v = parse_number(cells[c]);
      if (!v) {
        throw InvalidInput("line " + std::to_string(line_numbers[r]) + ", column " +
                           std::to_string(c) + ": non-numeric value '" + std::string(cells[c]) +
                           "'");
      }
      row[fi++] = *v;
    }
    if (missing) continue;
    if (!seen.insert(row).second) continue;
    values.insert(values.end(), row.begin(), row.end());
    if (label_col) {
      const std::string key(cells[*label_col]);
      auto [it, inserted] = class_ids.emplace(key, static_cast<int>(class_ids.size()));
      if (inserted) d.class_names.push_back(key);
      labels.push_back(it->second);
    }
    ++kept;
  }
  if (kept == 0) throw InvalidInput("empty dataset");

  d.instances = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(kept),
                                   static_cast<Eigen::Index>(f));
  if (label_col) d.labels = std::move(labels);
  return d;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CsvOptions opts = options;
  if (opts.name.empty()) opts.name = path.stem().string();
  return parse_dataset(buffer.str(), opts);
}

Dataset normalize(const Dataset& d) {
  if (d.size() == 0) throw InvalidInput("empty dataset");
  Dataset out = d;
  for (Eigen::Index j = 0; j < d.instances.cols(); ++j) {
    const auto col = d.instances.col(j);
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (hi > lo) {
      out.instances.col(j) = (col.array() - lo) / (hi - lo);
    } else {
      out.instances.col(j).setZero();
    }
  }
  return out;
}

DistanceStats distance_stats(const Dataset& d) {
  const auto n = d.instances.rows();
  if (n < 2) throw InvalidInput("distance statistics need at least 2 instances");
  double min_sq = std::numeric_limits<double>::infinity();
  double max_sq = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double sq = (d.instances.row(i) - d.instances.row(j)).squaredNorm();
      if (sq > 0.0) min_sq = std::min(min_sq, sq);
      max_sq = std::max(max_sq, sq);
    }
  }
  if (!std::isfinite(min_sq)) min_sq = 0.0;
  return {std::sqrt(min_sq), std::sqrt(max_sq)};
}

std::size_t supervision_size(std::size_t n) { return (7 * n + 5) / 10; }

SupervisionSplit split_supervision(const Dataset& d, std::uint64_t seed) {
  if (!d.labeled()) throw InvalidInput("supervision split needs a labelled dataset");
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto cut = order.begin() + static_cast<std::ptrdiff_t>(supervision_size(d.size()));
  SupervisionSplit split;
  split.seed = seed;
  split.supervision.assign(order.begin(), cut);
  split.leftout.assign(cut, order.end());
  std::sort(split.supervision.begin(), split.supervision.end());
  std::sort(split.leftout.begin(), split.leftout.end());
  return split;
}

std::uint64_t fingerprint(const Dataset& d) {
  const std::uint64_t shape[2] = {d.size(), d.dims()};
  auto h = fnv1a({reinterpret_cast<const char*>(shape), sizeof shape});
  return fnv1a({reinterpret_cast<const char*>(d.instances.data()),
                static_cast<std::size_t>(d.instances.size()) * sizeof(double)},
               h);
}

}  // namespace cobs
