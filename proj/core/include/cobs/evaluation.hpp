#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cobs/clustering.hpp"
#include "cobs/constraints.hpp"
#include "cobs/dataset.hpp"

namespace cobs {

/// Adjusted Rand Index between two labelings of the same instances.
/// Noise labels are singletons. Computed from exact integer pair counts,
/// so the only rounding is the final division.
double adjusted_rand_index(std::span<const Label> a, std::span<const Label> b);

/// ARI restricted to the instances in `eval_idx`. Throws InvalidInput when
/// fewer than two instances are given.
double adjusted_rand_index(std::span<const Label> a, std::span<const Label> b,
                           std::span<const std::size_t> eval_idx);

/// Instances that appear in no constraint of `cs`.
std::vector<std::size_t> unconstrained_indices(std::size_t n, const ConstraintSet& cs);

/// ARI of `selected` against the dataset labels over the constraint-free
/// instances.
double evaluate_selected(const Clustering& selected, const Dataset& d, const ConstraintSet& cs);

}  // namespace cobs
