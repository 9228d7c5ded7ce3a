// cobs: command-line front end for ensemble generation, constraint-based
// selection, active querying, experiments and the session service.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <string>

#include "cobs/active.hpp"
#include "cobs/constraints.hpp"
#include "cobs/dataset.hpp"
#include "cobs/ensemble.hpp"
#include "cobs/evaluation.hpp"
#include "cobs/experiment.hpp"
#include "cobs/io.hpp"
#include "cobs/selection.hpp"
#include "cobs/service/session_service.hpp"

#include <CLI11.hpp>
#include <httplib.h>

namespace {

using namespace cobs;

struct DataArgs {
  std::string path;
  std::string label_col;

  Dataset load() const {
    CsvOptions options;
    if (!label_col.empty()) options.label_column = label_col;
    return load_dataset(path, options);
  }
};

HyperGrid load_grid(const std::string& spec) {
  if (spec.empty() || spec == "default") return HyperGrid::defaults();
  return grid_from_json(read_json_file(spec));
}

int cmd_generate(const DataArgs& data, const std::string& grid_spec, const std::string& out, unsigned workers) {
  const Dataset d = normalize(data.load());
  const auto start = std::chrono::steady_clock::now();
  const auto ensemble = generate_ensemble(d, load_grid(grid_spec), GenerateOptions{workers});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json_file(out, to_json(ensemble));
  std::size_t per_algo[3] = {};
  for (const auto& c : ensemble.clusterings) ++per_algo[static_cast<int>(algorithm_of(c.provenance))];
  std::printf("%s: %zu x %zu, %zu clusterings (kmeans %zu, dbscan %zu, spectral %zu), %zu skipped, %.1fs\n",
              d.name.c_str(), d.size(), d.dims(), ensemble.size(), per_algo[0], per_algo[1], per_algo[2],
              ensemble.skipped.size(), secs);
  for (const auto& s : ensemble.skipped) {
    std::printf("  skipped %s: %s\n", describe(s.provenance).c_str(), s.reason.c_str());
  }
  return 0;
}

int cmd_constraints(const DataArgs& data, std::size_t count, std::uint64_t seed, const std::string& out) {
  const Dataset d = data.load();
  const auto split = split_supervision(d, seed);
  LabelOracle oracle(d);
  const auto cs = generate_random_constraints(split, oracle, count, derive_seed(seed, 1));
  write_json_file(out, to_json(cs), 1);
  std::printf("%zu constraints (%zu must-link, %zu cannot-link) from %zu supervision instances\n", cs.size(),
              cs.must_link_count(), cs.cannot_link_count(), split.supervision.size());
  return 0;
}

void print_selection(const ClusteringEnsemble& e, std::size_t index, const std::string& out) {
  const auto& c = e[index];
  json summary = {{"index", index}, {"provenance", to_json(c.provenance)}, {"clusters", c.cluster_count()},
                  {"noise", c.noise_count()}};
  std::cout << summary.dump() << '\n';
  if (out.empty()) {
    std::cout << json(c.assignment).dump() << '\n';
  } else {
    write_json_file(out, to_json(c));
  }
}

int cmd_select(const std::string& ensemble_path, const std::string& constraints_path, std::uint64_t seed,
               const std::string& method, const std::string& out) {
  const auto ensemble = ensemble_from_json(read_json_file(ensemble_path));
  const auto cs = constraints_from_json(read_json_file(constraints_path));
  Selection sel;
  if (method == "cobs") {
    sel = cobs_select(ensemble, cs, seed);
  } else if (method == "numsat-kmeans" || method == "numsat-spectral") {
    const auto algo = method == "numsat-kmeans" ? Algorithm::kmeans : Algorithm::spectral;
    sel = numsat_select(ensemble, ensemble.indices_of(algo), cs);
  } else {
    throw InvalidInput("unknown selection method '" + method + "'");
  }
  std::fprintf(stderr, "satisfies %zu of %zu constraints\n", sel.score, cs.size());
  print_selection(ensemble, sel.index, out);
  return 0;
}

int cmd_active(const std::string& ensemble_path, const DataArgs& data, const ActiveConfig& config,
               const std::string& oracle_kind, const std::string& out) {
  auto ensemble = std::make_shared<ClusteringEnsemble>(ensemble_from_json(read_json_file(ensemble_path)));
  const std::size_t n = ensemble->clusterings.front().size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  ActiveSession session(ensemble, config, sample_pool(all, config));

  std::optional<Dataset> d;
  std::unique_ptr<Oracle> oracle;
  if (oracle_kind == "labels") {
    if (data.path.empty()) throw InvalidInput("--oracle labels needs --data with a label column");
    d = data.load();
    oracle = std::make_unique<LabelOracle>(*d);
  } else if (oracle_kind == "interactive") {
    if (!data.path.empty()) d = data.load();
    oracle = std::make_unique<CallbackOracle>([&](Pair p) {
      while (true) {
        std::printf("[%zu/%zu] same cluster? instances %u and %u", session.used() + 1, config.budget, p.i, p.j);
        if (d) {
          for (auto idx : {p.i, p.j}) {
            std::printf("\n  %u:", idx);
            for (Eigen::Index f = 0; f < d->instances.cols(); ++f) std::printf(" %g", d->instances(idx, f));
          }
        }
        std::printf("\n  answer [m]ust-link / [c]annot-link: ");
        std::fflush(stdout);
        std::string line;
        if (!std::getline(std::cin, line)) throw InvalidInput("input closed before the budget was spent");
        if (line == "m" || line == "M") return ConstraintKind::must_link;
        if (line == "c" || line == "C") return ConstraintKind::cannot_link;
      }
    });
  } else {
    throw InvalidInput("unknown oracle '" + oracle_kind + "'");
  }

  run_active(session, *oracle);
  const std::size_t chosen = session.result();
  std::fprintf(stderr, "%zu queries answered, selected weight %.6g\n", session.used(), session.weight(chosen));
  if (d && d->labeled()) {
    std::fprintf(stderr, "ARI on constraint-free instances: %.4f\n",
                 evaluate_selected(session.ensemble()[chosen], *d, session.queried()));
  }
  print_selection(session.ensemble(), chosen, out);
  return 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_dir) {
  const json spec_json = read_json_file(spec_path);
  const auto base = std::filesystem::path(spec_path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() || std::filesystem::exists(path) ? path : base / path;
  };

  CsvOptions options;
  if (spec_json.contains("label_col")) {
    const auto& l = spec_json.at("label_col");
    options.label_column = l.is_string() ? l.get<std::string>() : std::to_string(l.get<long>());
  }
  const Dataset d = normalize(load_dataset(resolve(spec_json.at("dataset").get<std::string>()), options));

  ExperimentSpec spec;
  spec.dataset_name = spec_json.value("name", d.name);
  spec.constraint_counts = spec_json.value("constraints", std::vector<std::size_t>{50});
  spec.repetitions = spec_json.value("repetitions", std::size_t{25});
  spec.master_seed = spec_json.value("seed", std::uint64_t{0});
  spec.workers = spec_json.value("workers", 1U);
  const auto modes = spec_json.value("modes", std::vector<std::string>{spec_json.value("mode", std::string("batch-random"))});
  if (spec_json.contains("active")) {
    const auto& a = spec_json.at("active");
    spec.active.m = a.value("m", 2.0);
    spec.active.sample_size = a.value("pool", std::size_t{1000});
  }

  std::optional<ClusteringEnsemble> ensemble;
  if (spec_json.contains("ensemble")) {
    ensemble = ensemble_from_json(read_json_file(resolve(spec_json.at("ensemble").get<std::string>())));
    if (ensemble->dataset_hash != fingerprint(d)) throw InvalidInput("ensemble was built from a different dataset");
  } else {
    ensemble = generate_ensemble(d, grid_from_json(spec_json.value("grid", json("default"))),
                                 GenerateOptions{spec.workers});
  }

  std::filesystem::create_directories(out_dir);
  ResultTable all;
  for (const auto& mode : modes) {
    spec.mode = parse_experiment_mode(mode);
    auto table = run_experiment(spec, d, *ensemble);
    std::string log;
    for (const auto& r : table.runs) {
      json constraints = json::array();
      for (const auto& c : r.constraint_log) constraints.push_back({c.pair.i, c.pair.j, to_string(c.kind)});
      log += json{{"mode", mode}, {"repetition", r.repetition}, {"constraints", r.constraints},
                  {"seed", r.seed}, {"selected", r.selected}, {"provenance", to_json((*ensemble)[r.selected].provenance)},
                  {"score", r.score}, {"max_score", r.max_score}, {"eval_size", r.eval_size},
                  {"ari", r.ari}, {"best_ari", r.best_ari}, {"constraint_log", constraints}}
                 .dump() +
             "\n";
    }
    write_text_file(std::filesystem::path(out_dir) / ("runs-" + mode + ".jsonl"), log);
    all.rows.insert(all.rows.end(), table.rows.begin(), table.rows.end());
    for (auto& r : table.runs) all.runs.push_back(std::move(r));
  }
  write_text_file(std::filesystem::path(out_dir) / "results.csv", to_csv(all));
  write_json_file(std::filesystem::path(out_dir) / "results.json", to_json(all), 2);
  std::cout << to_csv(all);
  return 0;
}

int cmd_serve(int port, const std::string& store, const std::string& ui_dir, unsigned workers) {
  service::SessionService svc(service::ServiceConfig{store, workers});
  httplib::Server server;
  service::register_routes(server, svc);
  if (!ui_dir.empty() && !server.set_mount_point("/ui", ui_dir)) {
    throw InvalidInput("cannot serve UI assets from " + ui_dir);
  }
  std::printf("listening on http://0.0.0.0:%d (store %s)\n", port, store.c_str());
  std::fflush(stdout);
  if (!server.listen("0.0.0.0", port)) throw Error("cannot listen on port " + std::to_string(port));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint-based clustering selection"};
  app.require_subcommand(1);

  DataArgs data;
  auto add_data = [&data](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--data", data.path, "CSV dataset");
    if (required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("--label-col", data.label_col, "label column (name, index, or -1 for last)");
  };

  std::string grid = "default", out, ensemble_path, constraints_path, method = "cobs", oracle = "labels";
  std::string spec_path, store = "cobs-store", ui_dir;
  unsigned workers = 1;
  std::size_t count = 50;
  std::uint64_t seed = 0;
  int port = 8080;
  ActiveConfig active;
  active.budget = 20;

  auto* gen = app.add_subcommand("generate", "generate the clustering ensemble");
  add_data(gen, true);
  gen->add_option("--grid", grid, "hyperparameter grid: 'default' or a JSON file");
  gen->add_option("--out", out, "ensemble JSON output")->required();
  gen->add_option("--workers", workers, "parallel workers");

  auto* con = app.add_subcommand("constraints", "draw random constraints from the class labels");
  add_data(con, true);
  con->add_option("--count", count, "number of constraints");
  con->add_option("--seed", seed, "random seed");
  con->add_option("--out", out, "constraints JSON output")->required();

  auto* sel = app.add_subcommand("select", "select the clustering satisfying the most constraints");
  sel->add_option("--ensemble", ensemble_path)->required()->check(CLI::ExistingFile);
  sel->add_option("--constraints", constraints_path)->required()->check(CLI::ExistingFile);
  sel->add_option("--seed", seed, "tie-break seed");
  sel->add_option("--method", method, "cobs | numsat-kmeans | numsat-spectral");
  sel->add_option("--out", out, "write the selected clustering here instead of stdout");

  auto* act = app.add_subcommand("active", "select constraints actively and return the best-weighted clustering");
  act->add_option("--ensemble", ensemble_path)->required()->check(CLI::ExistingFile);
  add_data(act, false);
  act->add_option("--budget", active.budget, "number of queries");
  act->add_option("--m", active.m, "weight update factor");
  act->add_option("--pool", active.sample_size, "candidate pair sample size");
  act->add_option("--seed", active.seed, "pool sampling and tie-break seed");
  act->add_option("--oracle", oracle, "labels | interactive");
  act->add_option("--out", out, "write the selected clustering here instead of stdout");

  auto* bench = app.add_subcommand("bench", "run a repeated selection experiment");
  bench->add_option("--spec", spec_path, "experiment spec JSON")->required()->check(CLI::ExistingFile);
  bench->add_option("--out", out, "output directory")->required();

  auto* serve = app.add_subcommand("serve", "serve the interactive session API");
  serve->add_option("--port", port);
  serve->add_option("--store", store, "directory for datasets, ensembles and sessions");
  serve->add_option("--ui", ui_dir, "static UI bundle served under /ui");
  serve->add_option("--workers", workers, "ensemble generation workers");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_generate(data, grid, out, workers);
    if (*con) return cmd_constraints(data, count, seed, out);
    if (*sel) return cmd_select(ensemble_path, constraints_path, seed, method, out);
    if (*act) return cmd_active(ensemble_path, data, active, oracle, out);
    if (*bench) return cmd_bench(spec_path, out);
    if (*serve) return cmd_serve(port, store, ui_dir, workers);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
