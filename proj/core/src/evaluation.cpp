#include "cobs/evaluation.hpp"

#include <cstdint>
#include <map>
#include <unordered_map>

#include "cobs/error.hpp"

namespace cobs {
namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - (n > 0)) / 2; }

// Noise points become singletons by giving each one a key of its own.
std::int64_t key_of(Label l, std::size_t i) {
  return l == kNoise ? -1 - static_cast<std::int64_t>(i) : l;
}

}  // namespace

double adjusted_rand_index(std::span<const Label> a, std::span<const Label> b,
                           std::span<const std::size_t> eval_idx) {
  if (eval_idx.size() < 2) throw InvalidInput("ARI needs at least two instances");
  std::unordered_map<std::int64_t, std::uint64_t> rows;
  std::unordered_map<std::int64_t, std::uint64_t> cols;
  std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> cells;
  for (std::size_t i : eval_idx) {
    if (i >= a.size() || i >= b.size()) throw InvalidInput("evaluation index out of range");
    const auto ka = key_of(a[i], i);
    const auto kb = key_of(b[i], i);
    ++rows[ka];
    ++cols[kb];
    ++cells[{ka, kb}];
  }
  std::uint64_t index = 0;
  for (const auto& [key, count] : cells) index += pairs_of(count);
  std::uint64_t sum_a = 0;
  for (const auto& [key, count] : rows) sum_a += pairs_of(count);
  std::uint64_t sum_b = 0;
  for (const auto& [key, count] : cols) sum_b += pairs_of(count);
  const std::uint64_t total = pairs_of(eval_idx.size());

  // ARI = (index - E) / (max - E) with E = sum_a sum_b / total and
  // max = (sum_a + sum_b) / 2, multiplied through by 2 total.
  const double numerator = 2.0 * (static_cast<double>(total) * static_cast<double>(index) -
                                  static_cast<double>(sum_a) * static_cast<double>(sum_b));
  const double denominator =
      static_cast<double>(total) * static_cast<double>(sum_a + sum_b) -
      2.0 * static_cast<double>(sum_a) * static_cast<double>(sum_b);
  if (denominator == 0.0) return 1.0;  // both partitions trivial and identical
  return numerator / denominator;
}

double adjusted_rand_index(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw InvalidInput("labelings differ in length");
  std::vector<std::size_t> all(a.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return adjusted_rand_index(a, b, all);
}

std::vector<std::size_t> unconstrained_indices(std::size_t n, const ConstraintSet& cs) {
  std::vector<bool> used(n, false);
  for (const auto& c : cs) {
    used[c.pair.i] = true;
    used[c.pair.j] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

double evaluate_selected(const Clustering& selected, const Dataset& d, const ConstraintSet& cs) {
  if (!d.labeled()) throw InvalidInput("evaluation needs a labelled dataset");
  const auto eval = unconstrained_indices(d.size(), cs);
  if (eval.size() < 2) throw InvalidInput("fewer than two constraint-free instances");
  const std::vector<Label> truth(d.labels->begin(), d.labels->end());
  return adjusted_rand_index(selected.assignment, truth, eval);
}

}  // namespace cobs
