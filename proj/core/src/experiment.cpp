#include "cobs/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>

#include "cobs/error.hpp"
#include "cobs/evaluation.hpp"
#include "cobs/random.hpp"
#include "cobs/selection.hpp"

namespace cobs {

std::string to_string(ExperimentMode mode) {
  return mode == ExperimentMode::active ? "active" : "batch-random";
}

ExperimentMode parse_experiment_mode(std::string_view text) {
  if (text == "active") return ExperimentMode::active;
  if (text == "batch-random" || text == "random") return ExperimentMode::batch_random;
  throw InvalidInput("unknown experiment mode '" + std::string(text) + "'");
}

std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep) {
  return derive_seed(master, rep);
}

namespace {

enum Stream : std::uint64_t { kSplit = 1, kPool = 2, kConstraints = 1000, kTieBreak = 2000 };

struct Context {
  const ExperimentSpec& spec;
  const Dataset& d;
  const ClusteringEnsemble& ensemble;
  std::shared_ptr<const ClusteringEnsemble> shared;
  std::vector<Label> truth;
};

void score_run(const Context& ctx, RunRecord& run, const ConstraintSet& cs) {
  const auto scores = satisfaction_scores(ctx.ensemble, cs);
  run.score = scores[run.selected];
  run.max_score = *std::max_element(scores.begin(), scores.end());
  const auto eval = unconstrained_indices(ctx.d.size(), cs);
  if (eval.size() < 2) throw InvalidInput("fewer than two constraint-free instances");
  run.eval_size = eval.size();
  run.ari = adjusted_rand_index(ctx.ensemble[run.selected].assignment, ctx.truth, eval);
  run.best_ari = -1.0;
  for (const auto& c : ctx.ensemble.clusterings) {
    run.best_ari = std::max(run.best_ari, adjusted_rand_index(c.assignment, ctx.truth, eval));
  }
  run.constraint_log = cs.items();
}

std::vector<RunRecord> run_repetition(const Context& ctx, std::size_t rep) {
  const auto& spec = ctx.spec;
  const std::uint64_t seed = repetition_seed(spec.master_seed, rep);
  const auto split = split_supervision(ctx.d, derive_seed(seed, kSplit));
  LabelOracle oracle(ctx.d);
  std::vector<RunRecord> runs;

  if (spec.mode == ExperimentMode::batch_random) {
    for (std::size_t c : spec.constraint_counts) {
      RunRecord run;
      run.repetition = rep;
      run.constraints = c;
      run.seed = seed;
      const auto cs = generate_random_constraints(split, oracle, c, derive_seed(seed, kConstraints + c));
      const auto sel = cobs_select(ctx.ensemble, cs, derive_seed(seed, kTieBreak + c));
      run.selected = sel.index;
      score_run(ctx, run, cs);
      if (run.score != run.max_score || sel.score != run.max_score) {
        throw Error("selected clustering does not maximise constraint satisfaction");
      }
      runs.push_back(std::move(run));
    }
    return runs;
  }

  ActiveConfig config = spec.active;
  config.budget = spec.constraint_counts.empty() ? 0 : spec.constraint_counts.back();
  config.seed = derive_seed(seed, kPool);
  ActiveSession session(ctx.shared, config, sample_pool(split.supervision, config));
  for (std::size_t c : spec.constraint_counts) {
    while (session.used() < c && session.pool_size() > 0) {
      const Pair p = session.next_query();
      session.answer(p, oracle.query(p));
    }
    RunRecord run;
    run.repetition = rep;
    run.constraints = c;
    run.seed = seed;
    run.selected = session.result();
    score_run(ctx, run, session.queried());
    runs.push_back(std::move(run));
  }
  return runs;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec, const Dataset& d,
                           const ClusteringEnsemble& ensemble) {
  if (spec.repetitions < 1) throw InvalidInput("experiment needs at least one repetition");
  if (!std::is_sorted(spec.constraint_counts.begin(), spec.constraint_counts.end()) ||
      std::adjacent_find(spec.constraint_counts.begin(), spec.constraint_counts.end()) !=
          spec.constraint_counts.end()) {
    throw InvalidInput("constraint counts must be increasing");
  }
  if (!d.labeled()) throw InvalidInput("experiments need a labelled dataset");
  if (ensemble.empty()) throw InvalidInput("experiment ensemble is empty");

  Context ctx{spec, d, ensemble, std::shared_ptr<const ClusteringEnsemble>(&ensemble, [](auto*) {}),
              std::vector<Label>(d.labels->begin(), d.labels->end())};

  std::vector<std::vector<RunRecord>> per_rep(spec.repetitions);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t rep; (rep = next.fetch_add(1)) < spec.repetitions;) {
      try {
        per_rep[rep] = run_repetition(ctx, rep);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(
              Error("repetition " + std::to_string(rep) + ": " + e.what()));
        }
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(spec.workers, 1U, static_cast<unsigned>(spec.repetitions));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ResultTable table;
  const std::string method = spec.mode == ExperimentMode::active ? "cobs-active" : "cobs-random";
  for (std::size_t ci = 0; ci < spec.constraint_counts.size(); ++ci) {
    ResultRow row;
    row.dataset = spec.dataset_name.empty() ? d.name : spec.dataset_name;
    row.method = method;
    row.constraints = spec.constraint_counts[ci];
    double best_sum = 0.0;
    for (const auto& runs : per_rep) {
      const auto& run = runs[ci];
      row.per_run.push_back(run.ari);
      best_sum += run.best_ari;
      ++row.histogram[static_cast<std::size_t>(algorithm_of(ensemble[run.selected].provenance))];
    }
    const double count = static_cast<double>(row.per_run.size());
    double sum = 0.0;
    for (double v : row.per_run) sum += v;
    row.mean_ari = sum / count;
    double var = 0.0;
    for (double v : row.per_run) var += (v - row.mean_ari) * (v - row.mean_ari);
    row.std_ari = std::sqrt(var / count);
    row.mean_best_ari = best_sum / count;
    table.rows.push_back(std::move(row));
  }
  for (auto& runs : per_rep) {
    for (auto& run : runs) table.runs.push_back(std::move(run));
  }
  return table;
}

}  // namespace cobs
