#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cobs/active.hpp"
#include "cobs/constraints.hpp"
#include "cobs/dataset.hpp"
#include "cobs/ensemble.hpp"

namespace cobs {

enum class ExperimentMode { batch_random, active };

std::string to_string(ExperimentMode mode);
ExperimentMode parse_experiment_mode(std::string_view text);

struct ExperimentSpec {
  std::string dataset_name;
  std::vector<std::size_t> constraint_counts{50};
  std::size_t repetitions = 25;
  ExperimentMode mode = ExperimentMode::batch_random;
  ActiveConfig active;  // budget is taken from constraint_counts
  std::uint64_t master_seed = 0;
  unsigned workers = 1;
};

/// One repetition at one constraint count; enough to replay it.
struct RunRecord {
  std::size_t repetition = 0;
  std::size_t constraints = 0;
  std::uint64_t seed = 0;
  std::size_t selected = 0;
  std::size_t score = 0;
  std::size_t max_score = 0;
  std::size_t eval_size = 0;
  double ari = 0.0;
  double best_ari = 0.0;  // best ensemble member on the same instances
  std::vector<Constraint> constraint_log;
};

struct ResultRow {
  std::string dataset;
  std::string method;
  std::size_t constraints = 0;
  double mean_ari = 0.0;
  double std_ari = 0.0;
  double mean_best_ari = 0.0;
  std::vector<double> per_run;
  std::array<std::size_t, 3> histogram{};  // selections by K-means / DBSCAN / spectral
};

struct ResultTable {
  std::vector<ResultRow> rows;
  std::vector<RunRecord> runs;
};

/// Repeats, for every repetition: a fresh 70/30 split, constraints drawn
/// from the supervision part (randomly, or by an active session), selection
/// over `ensemble`, and ARI on the constraint-free instances. Bit
/// reproducible from `master_seed` for any worker count.
ResultTable run_experiment(const ExperimentSpec& spec, const Dataset& d,
                           const ClusteringEnsemble& ensemble);

/// Seeds of repetition `rep`.
std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep);

}  // namespace cobs
