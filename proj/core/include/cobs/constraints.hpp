#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/dataset.hpp"
#include "cobs/random.hpp"

namespace cobs {

enum class ConstraintKind { must_link, cannot_link };

std::string to_string(ConstraintKind kind);
/// Accepts "MUST_LINK"/"CANNOT_LINK" and the short forms "ML"/"CL".
ConstraintKind parse_constraint_kind(std::string_view text);

/// Unordered instance pair stored canonically (i < j).
struct Pair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;

  Pair() = default;
  Pair(std::size_t a, std::size_t b);

  auto operator<=>(const Pair&) const = default;
  std::uint64_t key() const { return (std::uint64_t{i} << 32) | j; }
};

struct Constraint {
  Pair pair;
  ConstraintKind kind = ConstraintKind::must_link;
  bool operator==(const Constraint&) const = default;
};

/// Disjoint must-link and cannot-link pair sets, kept in insertion order.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  /// Throws InvalidInput if the pair is already constrained.
  void add(Constraint c);
  void add(Pair p, ConstraintKind kind) { add(Constraint{p, kind}); }

  bool contains(Pair p) const { return index_.contains(p.key()); }
  const ConstraintKind* find(Pair p) const;

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t must_link_count() const { return ml_count_; }
  std::size_t cannot_link_count() const { return items_.size() - ml_count_; }

  const std::vector<Constraint>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// Sorted distinct instance indices touched by any constraint.
  std::vector<std::size_t> involved() const;

 private:
  std::vector<Constraint> items_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
  std::size_t ml_count_ = 0;
};

/// Answer source for pairwise queries. Every answer is logged.
class Oracle {
 public:
  virtual ~Oracle() = default;

  ConstraintKind query(Pair p);
  const std::vector<Constraint>& log() const { return log_; }

 protected:
  virtual ConstraintKind answer(Pair p) = 0;

 private:
  std::vector<Constraint> log_;
};

/// Must-link iff both instances carry the same class label.
class LabelOracle final : public Oracle {
 public:
  explicit LabelOracle(std::vector<int> labels);
  explicit LabelOracle(const Dataset& d);

 protected:
  ConstraintKind answer(Pair p) override;

 private:
  std::vector<int> labels_;
};

/// Delegates to a callback, e.g. a person at a terminal.
class CallbackOracle final : public Oracle {
 public:
  explicit CallbackOracle(std::function<ConstraintKind(Pair)> fn) : fn_(std::move(fn)) {}

 protected:
  ConstraintKind answer(Pair p) override { return fn_(p); }

 private:
  std::function<ConstraintKind(Pair)> fn_;
};

/// `count` distinct pairs drawn uniformly without replacement from the
/// pairs of `indices`, skipping pairs in `exclude`. Returned sorted.
std::vector<Pair> sample_pairs(std::span<const std::size_t> indices, std::size_t count, Rng& rng,
                               const ConstraintSet* exclude = nullptr);

/// Distinct random supervision pairs, each labelled by the oracle.
ConstraintSet generate_random_constraints(const SupervisionSplit& split, Oracle& oracle,
                                          std::size_t count, std::uint64_t seed);

/// Satisfied must-links plus satisfied cannot-links. Noise points are
/// singleton clusters.
std::size_t satisfaction_score(const Clustering& c, const ConstraintSet& cs);

}  // namespace cobs
