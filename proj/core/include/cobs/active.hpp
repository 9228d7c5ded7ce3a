#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cobs/constraints.hpp"
#include "cobs/ensemble.hpp"

namespace cobs {

struct ActiveConfig {
  std::size_t budget = 0;
  double m = 2.0;  // weight update factor
  std::size_t sample_size = 1000;
  std::uint64_t seed = 0;  // pool draw and result tie-break
};

/// |weight of clusterings placing the pair together - weight of those
/// separating it|. Noise points are singletons.
double weighted_agreement(const ClusteringEnsemble& ensemble, std::span<const double> weights,
                          Pair pair);

/// Pool of `config.sample_size` candidate pairs (or all of them, when there
/// are fewer) drawn from the pairs of `candidates` with `config.seed`.
std::vector<Pair> sample_pool(std::span<const std::size_t> candidates, const ActiveConfig& config,
                              const ConstraintSet* exclude = nullptr);

/// One run of active constraint selection over a fixed ensemble.
///
/// Each clustering's weight is kept as a common scale times m^net, where
/// net counts correct minus incorrect predictions on the answered pairs.
/// The scale starts at 1/|C|, so every weight equals (1/|C|) m^net and
/// answering a pair multiplies a weight by m or divides it by m. Query and
/// result selection compare m^net only, which makes them independent of
/// the scale. Weights are never renormalised.
///
/// Strictly serial: one pending query at a time.
class ActiveSession {
 public:
  ActiveSession(std::shared_ptr<const ClusteringEnsemble> ensemble, ActiveConfig config,
                std::vector<Pair> pool);

  /// Pool pair with the lowest weighted agreement, ties to the smallest
  /// pair. Marks it pending; repeated calls return the same pending pair.
  Pair next_query();
  void answer(Pair pair, ConstraintKind kind);

  /// Highest weight; ties by satisfied queried constraints, then by a
  /// uniformly random order fixed from the seed at construction.
  std::size_t result() const;
  /// Ensemble indices ordered as `result` ranks them.
  std::vector<std::size_t> ranking(std::size_t limit) const;

  double weight(std::size_t c) const { return scale_ * relative_[c]; }
  std::vector<double> weights() const;
  double agreement(Pair pair) const;
  void scale_weights(double factor);

  const ClusteringEnsemble& ensemble() const { return *ensemble_; }
  const std::shared_ptr<const ClusteringEnsemble>& ensemble_ptr() const { return ensemble_; }
  const ActiveConfig& config() const { return config_; }
  std::size_t used() const { return queried_.size(); }
  bool budget_exhausted() const { return used() >= config_.budget; }
  const std::optional<Pair>& pending() const { return pending_; }
  const ConstraintSet& queried() const { return queried_; }
  std::vector<Pair> pool() const;
  std::size_t pool_size() const { return pool_remaining_; }
  int net(std::size_t c) const { return net_[c]; }
  std::size_t correct(std::size_t c) const { return correct_[c]; }

 private:
  double pair_agreement(std::size_t slot) const;

  std::shared_ptr<const ClusteringEnsemble> ensemble_;
  ActiveConfig config_;
  std::vector<Pair> pool_;
  std::vector<bool> open_;
  std::size_t pool_remaining_ = 0;
  // together_[slot * |C| + c] caches clustering c's vote on pool pair slot
  std::vector<std::uint8_t> together_;
  std::vector<int> net_;
  std::vector<std::size_t> correct_;
  std::vector<double> relative_;
  std::vector<std::size_t> tie_rank_;
  double scale_ = 1.0;
  std::optional<Pair> pending_;
  std::optional<std::size_t> pending_slot_;
  ConstraintSet queried_;
};

/// Drives a session to its budget (or pool exhaustion) with `oracle`.
void run_active(ActiveSession& session, Oracle& oracle);

}  // namespace cobs
