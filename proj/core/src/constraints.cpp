#include "cobs/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cobs/error.hpp"

namespace cobs {

std::string to_string(ConstraintKind kind) {
  return kind == ConstraintKind::must_link ? "MUST_LINK" : "CANNOT_LINK";
}

ConstraintKind parse_constraint_kind(std::string_view text) {
  if (text == "MUST_LINK" || text == "ML" || text == "must_link") return ConstraintKind::must_link;
  if (text == "CANNOT_LINK" || text == "CL" || text == "cannot_link") return ConstraintKind::cannot_link;
  throw InvalidInput("unknown constraint kind '" + std::string(text) + "'");
}

Pair::Pair(std::size_t a, std::size_t b) {
  if (a == b) throw InvalidInput("a constraint needs two distinct instances");
  if (a > b) std::swap(a, b);
  i = static_cast<std::uint32_t>(a);
  j = static_cast<std::uint32_t>(b);
}

void ConstraintSet::add(Constraint c) {
  const auto [it, inserted] = index_.emplace(c.pair.key(), items_.size());
  if (!inserted) {
    throw InvalidInput("pair (" + std::to_string(c.pair.i) + ", " + std::to_string(c.pair.j) +
                       ") is already constrained");
  }
  items_.push_back(c);
  ml_count_ += c.kind == ConstraintKind::must_link;
}

const ConstraintKind* ConstraintSet::find(Pair p) const {
  const auto it = index_.find(p.key());
  return it == index_.end() ? nullptr : &items_[it->second].kind;
}

std::vector<std::size_t> ConstraintSet::involved() const {
  std::vector<std::size_t> out;
  out.reserve(items_.size() * 2);
  for (const auto& c : items_) {
    out.push_back(c.pair.i);
    out.push_back(c.pair.j);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ConstraintKind Oracle::query(Pair p) {
  const ConstraintKind kind = answer(p);
  log_.push_back({p, kind});
  return kind;
}

LabelOracle::LabelOracle(std::vector<int> labels) : labels_(std::move(labels)) {}

LabelOracle::LabelOracle(const Dataset& d) {
  if (!d.labeled()) throw InvalidInput("label oracle needs a labelled dataset");
  labels_ = *d.labels;
}

ConstraintKind LabelOracle::answer(Pair p) {
  if (p.j >= labels_.size()) throw InvalidInput("pair index out of range");
  return labels_[p.i] == labels_[p.j] ? ConstraintKind::must_link : ConstraintKind::cannot_link;
}

namespace {

// Inverse of the row-major enumeration of pairs (a < b) over s items.
std::pair<std::size_t, std::size_t> decode_pair(std::uint64_t t, std::size_t s) {
  // Row a starts at offset a*s - a*(a+1)/2 and holds s-a-1 pairs.
  auto row_start = [s](std::uint64_t a) { return a * s - a * (a + 1) / 2; };
  const double sd = static_cast<double>(s);
  auto a = static_cast<std::uint64_t>(
      std::floor(sd - 0.5 - std::sqrt((sd - 0.5) * (sd - 0.5) - 2.0 * static_cast<double>(t))));
  while (a > 0 && row_start(a) > t) --a;
  while (row_start(a + 1) <= t) ++a;
  const std::uint64_t b = a + 1 + (t - row_start(a));
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

}  // namespace

std::vector<Pair> sample_pairs(std::span<const std::size_t> indices, std::size_t count, Rng& rng,
                               const ConstraintSet* exclude) {
  const std::size_t s = indices.size();
  const std::uint64_t total = s < 2 ? 0 : std::uint64_t{s} * (s - 1) / 2;
  std::size_t excluded = 0;
  if (exclude) {
    std::unordered_set<std::size_t> members(indices.begin(), indices.end());
    for (const auto& c : *exclude) {
      excluded += members.contains(c.pair.i) && members.contains(c.pair.j);
    }
  }
  if (count > total - excluded) {
    throw InvalidInput("cannot draw " + std::to_string(count) + " distinct pairs from " +
                       std::to_string(total - excluded) + " available");
  }
  auto to_pair = [&](std::uint64_t t) {
    const auto [a, b] = decode_pair(t, s);
    return Pair(indices[a], indices[b]);
  };

  std::vector<Pair> out;
  out.reserve(count);
  if (count * 3 >= total) {
    // Dense request: shuffle the full enumeration.
    std::vector<std::uint64_t> all;
    for (std::uint64_t t = 0; t < total; ++t) {
      if (!exclude || !exclude->contains(to_pair(t))) all.push_back(t);
    }
    std::shuffle(all.begin(), all.end(), rng);
    for (std::size_t k = 0; k < count; ++k) out.push_back(to_pair(all[k]));
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    std::unordered_set<std::uint64_t> taken;
    while (out.size() < count) {
      const std::uint64_t t = pick(rng);
      if (!taken.insert(t).second) continue;
      const Pair p = to_pair(t);
      if (exclude && exclude->contains(p)) continue;
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ConstraintSet generate_random_constraints(const SupervisionSplit& split, Oracle& oracle,
                                          std::size_t count, std::uint64_t seed) {
  if (split.supervision.size() < 2 && count > 0) {
    throw InvalidInput("supervision set needs at least 2 instances");
  }
  Rng rng(seed);
  ConstraintSet cs;
  for (const Pair& p : sample_pairs(split.supervision, count, rng)) cs.add(p, oracle.query(p));
  return cs;
}

std::size_t satisfaction_score(const Clustering& c, const ConstraintSet& cs) {
  std::size_t score = 0;
  for (const auto& con : cs) {
    const bool together = c.together(con.pair.i, con.pair.j);
    score += together == (con.kind == ConstraintKind::must_link);
  }
  return score;
}

}  // namespace cobs
