#include "cobs/active.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cobs/error.hpp"
#include "cobs/random.hpp"

namespace cobs {

namespace {
constexpr std::uint64_t kTieStream = 1;
}

double weighted_agreement(const ClusteringEnsemble& ensemble, std::span<const double> weights,
                          Pair pair) {
  double same = 0.0;
  double different = 0.0;
  for (std::size_t c = 0; c < ensemble.size(); ++c) {
    if (ensemble[c].together(pair.i, pair.j)) {
      same += weights[c];
    } else {
      different += weights[c];
    }
  }
  return std::abs(same - different);
}

std::vector<Pair> sample_pool(std::span<const std::size_t> candidates, const ActiveConfig& config,
                              const ConstraintSet* exclude) {
  const std::size_t s = candidates.size();
  std::size_t available = s < 2 ? 0 : s * (s - 1) / 2;
  if (exclude) available -= std::min(available, exclude->size());
  Rng rng(config.seed);
  return sample_pairs(candidates, std::min(config.sample_size, available), rng, exclude);
}

ActiveSession::ActiveSession(std::shared_ptr<const ClusteringEnsemble> ensemble,
                             ActiveConfig config, std::vector<Pair> pool)
    : ensemble_(std::move(ensemble)), config_(config), pool_(std::move(pool)) {
  if (!ensemble_ || ensemble_->empty()) throw InvalidInput("active session needs a non-empty ensemble");
  if (!(config_.m > 0.0)) throw InvalidInput("weight update factor must be positive");
  std::sort(pool_.begin(), pool_.end());
  pool_.erase(std::unique(pool_.begin(), pool_.end()), pool_.end());
  const std::size_t n = ensemble_->clusterings.front().size();
  const std::size_t k = ensemble_->size();
  for (const Pair& p : pool_) {
    if (p.j >= n) throw InvalidInput("pool pair index out of range");
  }
  open_.assign(pool_.size(), true);
  pool_remaining_ = pool_.size();
  together_.resize(pool_.size() * k);
  for (std::size_t c = 0; c < k; ++c) {
    const auto& cl = (*ensemble_)[c];
    for (std::size_t s = 0; s < pool_.size(); ++s) {
      together_[s * k + c] = cl.together(pool_[s].i, pool_[s].j);
    }
  }
  net_.assign(k, 0);
  correct_.assign(k, 0);
  relative_.assign(k, 1.0);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(config_.seed, kTieStream));
  std::shuffle(order.begin(), order.end(), rng);
  tie_rank_.resize(k);
  for (std::size_t r = 0; r < k; ++r) tie_rank_[order[r]] = r;
  scale_ = 1.0 / static_cast<double>(k);
}

double ActiveSession::pair_agreement(std::size_t slot) const {
  const std::size_t k = relative_.size();
  const std::uint8_t* votes = together_.data() + slot * k;
  double same = 0.0;
  double different = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    (votes[c] ? same : different) += relative_[c];
  }
  return std::abs(same - different);
}

Pair ActiveSession::next_query() {
  if (pending_) return *pending_;
  if (budget_exhausted()) throw BudgetExhausted();
  if (pool_remaining_ == 0) throw PoolExhausted();
  std::size_t best = pool_.size();
  double best_value = 0.0;
  for (std::size_t s = 0; s < pool_.size(); ++s) {
    if (!open_[s]) continue;
    const double value = pair_agreement(s);
    if (best == pool_.size() || value < best_value) {
      best = s;
      best_value = value;
    }
  }
  pending_ = pool_[best];
  pending_slot_ = best;
  return *pending_;
}

void ActiveSession::answer(Pair pair, ConstraintKind kind) {
  if (!pending_ || *pending_ != pair) throw InvalidState("answer does not match the pending query");
  const bool must_link = kind == ConstraintKind::must_link;
  for (std::size_t c = 0; c < net_.size(); ++c) {
    if (ensemble_->clusterings[c].together(pair.i, pair.j) == must_link) {
      ++net_[c];
      ++correct_[c];
    } else {
      --net_[c];
    }
    relative_[c] = std::pow(config_.m, net_[c]);
  }
  queried_.add(pair, kind);
  open_[*pending_slot_] = false;
  --pool_remaining_;
  pending_.reset();
  pending_slot_.reset();
}

std::vector<std::size_t> ActiveSession::ranking(std::size_t limit) const {
  std::vector<std::size_t> order(relative_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto before = [this](std::size_t a, std::size_t b) {
    if (relative_[a] != relative_[b]) return relative_[a] > relative_[b];
    if (correct_[a] != correct_[b]) return correct_[a] > correct_[b];
    return tie_rank_[a] < tie_rank_[b];
  };
  limit = std::min(limit, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(limit), order.end(), before);
  order.resize(limit);
  return order;
}

std::size_t ActiveSession::result() const { return ranking(1).front(); }

std::vector<double> ActiveSession::weights() const {
  std::vector<double> out(relative_.size());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = weight(c);
  return out;
}

double ActiveSession::agreement(Pair pair) const {
  return scale_ * weighted_agreement(*ensemble_, relative_, pair);
}

void ActiveSession::scale_weights(double factor) {
  if (!(factor > 0.0)) throw InvalidInput("weight scale must be positive");
  scale_ *= factor;
}

std::vector<Pair> ActiveSession::pool() const {
  std::vector<Pair> out;
  for (std::size_t s = 0; s < pool_.size(); ++s) {
    if (open_[s]) out.push_back(pool_[s]);
  }
  return out;
}

void run_active(ActiveSession& session, Oracle& oracle) {
  while (!session.budget_exhausted() && session.pool_size() > 0) {
    const Pair p = session.next_query();
    session.answer(p, oracle.query(p));
  }
}

}  // namespace cobs
