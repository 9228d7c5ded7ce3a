#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace cobs {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Numeric instance matrix with optional class labels.
///
/// Rows are instances. Loading removes rows with missing values and exact
/// duplicate feature vectors; `normalize` rescales every feature to [0,1].
struct Dataset {
  std::string name;
  Matrix instances;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;  // label id -> original text

  std::size_t size() const { return static_cast<std::size_t>(instances.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(instances.cols()); }
  bool labeled() const { return labels.has_value(); }
  std::size_t class_count() const;
};

struct DistanceStats {
  double min_d = 0.0;  // smallest nonzero pairwise distance
  double max_d = 0.0;
};

struct SupervisionSplit {
  std::vector<std::size_t> supervision;  // sorted
  std::vector<std::size_t> leftout;      // sorted
  std::uint64_t seed = 0;
};

struct CsvOptions {
  /// Column name, 0-based index, or negative index counted from the end
  /// ("-1" is the last column). Unset means the file has no label column.
  std::optional<std::string> label_column;
  std::string name;
};

/// Parses comma-separated text. A header row is detected when its feature
/// cells are not all numeric. Empty cells, "?", "NA" and "NaN" are missing.
Dataset parse_dataset(std::string_view text, const CsvOptions& options = {});

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& options = {});

/// Per-feature min-max scaling; constant features become 0.
Dataset normalize(const Dataset& d);

DistanceStats distance_stats(const Dataset& d);

/// Seeded 70/30 partition of row indices; the supervision part has
/// round-half-up(0.7 n) rows.
SupervisionSplit split_supervision(const Dataset& d, std::uint64_t seed);

std::size_t supervision_size(std::size_t n);

/// Content hash of the instance matrix (shape and raw bytes).
std::uint64_t fingerprint(const Dataset& d);

}  // namespace cobs
