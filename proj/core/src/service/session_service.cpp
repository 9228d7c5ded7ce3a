#include "cobs/service/session_service.hpp"

#include <condition_variable>
#include <ctime>
#include <numeric>
#include <random>

#include "cobs/evaluation.hpp"
#include "cobs/projection.hpp"
#include "cobs/random.hpp"

namespace cobs::service {
namespace fs = std::filesystem;

std::string to_string(SessionStatus s) {
  switch (s) {
    case SessionStatus::generating: return "generating";
    case SessionStatus::idle: return "idle";
    case SessionStatus::awaiting_answer: return "awaiting_answer";
    case SessionStatus::done: return "done";
    case SessionStatus::failed: return "failed";
  }
  return "unknown";
}

namespace {

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ServiceError not_found(const std::string& what, const std::string& id) {
  return ServiceError(404, "not_found", what + " '" + id + "' not found");
}

bool valid_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         id.find_first_not_of("0123456789abcdef") == std::string::npos;
}

}  // namespace

struct SessionService::DatasetEntry {
  std::string id;
  Dataset raw;
  Dataset normalized;
  Matrix projection;
};

struct SessionService::EnsembleEntry {
  std::string id;
  std::shared_ptr<const ClusteringEnsemble> ensemble;
  std::string error;
  std::vector<std::weak_ptr<Session>> waiting;
};

struct SessionService::Session {
  std::string id;
  std::string dataset_id;
  std::string ensemble_id;
  json grid;
  ActiveConfig config;
  std::string created;
  std::string updated;
  std::shared_ptr<DatasetEntry> dataset;

  mutable std::mutex mutex;
  std::condition_variable changed;
  SessionStatus status = SessionStatus::generating;
  std::string error;
  std::optional<ActiveSession> active;
};

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  for (const char* sub : {"datasets", "ensembles", "sessions"}) {
    fs::create_directories(config_.store / sub);
  }
}

SessionService::~SessionService() {
  // Join generators before the maps they write into go away.
  std::vector<std::jthread> threads;
  {
    std::lock_guard lock(mutex_);
    threads.swap(generators_);
  }
  threads.clear();
}

json SessionService::create_dataset(std::string_view csv, const std::optional<std::string>& label_column,
                                    const std::string& name) {
  if (csv.empty()) throw ServiceError(400, "bad_request", "empty dataset upload");
  const std::string id =
      to_hex(fnv1a(label_column.value_or(""), fnv1a(csv)));
  CsvOptions options{label_column, name.empty() ? "dataset-" + id.substr(0, 8) : name};
  auto entry = std::make_shared<DatasetEntry>();
  entry->id = id;
  try {
    entry->raw = parse_dataset(csv, options);
  } catch (const InvalidInput& e) {
    throw ServiceError(400, "bad_request", e.what());
  }
  entry->normalized = normalize(entry->raw);
  entry->projection = principal_projection(entry->normalized.instances);

  const fs::path dir = config_.store / "datasets";
  if (!fs::exists(dir / (id + ".csv"))) {
    write_text_file(dir / (id + ".csv"), std::string(csv));
    write_json_file(dir / (id + ".json"),
                    {{"name", options.name}, {"label_column", label_column ? json(*label_column) : json()}});
  }
  {
    std::lock_guard lock(mutex_);
    datasets_.try_emplace(id, entry);
  }
  return get_dataset(id);
}

std::shared_ptr<SessionService::DatasetEntry> SessionService::find_dataset(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = datasets_.find(id); it != datasets_.end()) return it->second;
  }
  const fs::path dir = config_.store / "datasets";
  if (!valid_id(id) || !fs::exists(dir / (id + ".csv"))) return nullptr;
  const json meta = read_json_file(dir / (id + ".json"));
  auto entry = std::make_shared<DatasetEntry>();
  entry->id = id;
  CsvOptions options;
  if (!meta.at("label_column").is_null()) options.label_column = meta.at("label_column").get<std::string>();
  options.name = meta.value("name", std::string());
  entry->raw = parse_dataset(read_text_file(dir / (id + ".csv")), options);
  entry->normalized = normalize(entry->raw);
  entry->projection = principal_projection(entry->normalized.instances);
  std::lock_guard lock(mutex_);
  return datasets_.try_emplace(id, entry).first->second;
}

json SessionService::get_dataset(const std::string& id) {
  const auto d = find_dataset(id);
  if (!d) throw not_found("dataset", id);
  json projection = json::array();
  for (Eigen::Index i = 0; i < d->projection.rows(); ++i) {
    projection.push_back({d->projection(i, 0), d->projection.cols() > 1 ? d->projection(i, 1) : 0.0});
  }
  return {{"id", d->id},
          {"name", d->raw.name},
          {"n", d->raw.size()},
          {"f", d->raw.dims()},
          {"labeled", d->raw.labeled()},
          {"classes", d->raw.labeled() ? json(d->raw.class_count()) : json()},
          {"feature_names", d->raw.feature_names},
          {"projection", std::move(projection)}};
}

json SessionService::start_session(const json& request) {
  if (!request.is_object()) throw ServiceError(400, "bad_request", "session request must be an object");
  const std::string dataset_id = request.value("dataset_id", std::string());
  auto dataset = find_dataset(dataset_id);
  if (!dataset) throw not_found("dataset", dataset_id);

  auto s = std::make_shared<Session>();
  try {
    s->grid = to_json(grid_from_json(request.value("grid", json("default"))));
    s->config.budget = request.value("budget", std::size_t{20});
    s->config.m = request.value("m", 2.0);
    s->config.sample_size = request.value("pool_size", std::size_t{1000});
    s->config.seed = request.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_request", e.what());
  } catch (const InvalidInput& e) {
    throw ServiceError(400, "bad_request", e.what());
  }
  if (!(s->config.m > 0.0)) throw ServiceError(400, "bad_request", "m must be positive");
  if (s->config.sample_size < 1) throw ServiceError(400, "bad_request", "pool_size must be at least 1");

  s->dataset_id = dataset_id;
  s->dataset = dataset;
  s->ensemble_id = to_hex(fnv1a(s->grid.dump(), fnv1a(dataset_id)));
  s->created = s->updated = now_utc();

  std::shared_ptr<const ClusteringEnsemble> ready;
  {
    std::lock_guard lock(mutex_);
    s->id = to_hex(derive_seed(std::random_device{}() ^ (std::uint64_t{std::random_device{}()} << 32),
                               ++session_counter_));
    auto it = ensembles_.find(s->ensemble_id);
    if (it != ensembles_.end() && !it->second->ensemble) {
      throw ServiceError(409, "conflict", "ensemble generation already in progress for this dataset and grid");
    }
    if (it == ensembles_.end()) {
      const fs::path stored = config_.store / "ensembles" / (s->ensemble_id + ".json");
      if (fs::exists(stored)) {
        auto entry = std::make_shared<EnsembleEntry>();
        entry->id = s->ensemble_id;
        entry->ensemble = std::make_shared<const ClusteringEnsemble>(ensemble_from_json(read_json_file(stored)));
        it = ensembles_.emplace(entry->id, entry).first;
      }
    }
    if (it != ensembles_.end()) {
      ready = it->second->ensemble;
    } else {
      auto entry = std::make_shared<EnsembleEntry>();
      entry->id = s->ensemble_id;
      entry->waiting.push_back(s);
      ensembles_.emplace(entry->id, entry);
      const HyperGrid grid = grid_from_json(s->grid);
      generators_.emplace_back([this, entry, dataset, grid] {
        try {
          auto e = std::make_shared<ClusteringEnsemble>(
              generate_ensemble(dataset->normalized, grid, GenerateOptions{config_.workers}));
          write_json_file(config_.store / "ensembles" / (entry->id + ".json"), to_json(*e));
          std::lock_guard lock(mutex_);
          entry->ensemble = std::move(e);
        } catch (const std::exception& ex) {
          std::lock_guard lock(mutex_);
          entry->error = ex.what();
        }
        on_generated(entry->id);
      });
    }
    sessions_.emplace(s->id, s);
  }
  std::lock_guard lock(s->mutex);
  if (ready) {
    activate(*s, ready);
  } else if (s->status == SessionStatus::generating) {
    persist(*s);
  }
  return record(*s);
}

void SessionService::on_generated(const std::string& ensemble_id) {
  std::shared_ptr<EnsembleEntry> entry;
  std::vector<std::weak_ptr<Session>> waiting;
  {
    std::lock_guard lock(mutex_);
    entry = ensembles_.at(ensemble_id);
    waiting.swap(entry->waiting);
    if (!entry->ensemble) ensembles_.erase(ensemble_id);  // allow a retry
  }
  for (auto& weak : waiting) {
    auto s = weak.lock();
    if (!s) continue;
    std::lock_guard lock(s->mutex);
    if (entry->ensemble) {
      activate(*s, entry->ensemble);
    } else {
      s->status = SessionStatus::failed;
      s->error = entry->error;
      s->updated = now_utc();
    }
    s->changed.notify_all();
  }
}

void SessionService::activate(Session& s, std::shared_ptr<const ClusteringEnsemble> ensemble) {
  std::vector<std::size_t> all(s.dataset->normalized.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  s.active.emplace(std::move(ensemble), s.config, sample_pool(all, s.config));
  s.status = s.active->budget_exhausted() ? SessionStatus::done : SessionStatus::idle;
  s.updated = now_utc();
  persist(s);
}

void SessionService::persist(const Session& s) const {
  json answers = s.active ? to_json(s.active->queried()) : json::array();
  write_json_file(config_.store / "sessions" / (s.id + ".json"),
                  {{"id", s.id},
                   {"dataset_id", s.dataset_id},
                   {"ensemble_id", s.ensemble_id},
                   {"grid", s.grid},
                   {"config",
                    {{"budget", s.config.budget},
                     {"m", s.config.m},
                     {"pool_size", s.config.sample_size},
                     {"seed", s.config.seed}}},
                   {"answers", std::move(answers)},
                   {"created", s.created},
                   {"updated", s.updated}});
}

std::shared_ptr<SessionService::Session> SessionService::restore_session(const std::string& id) {
  const fs::path file = config_.store / "sessions" / (id + ".json");
  if (!valid_id(id) || !fs::exists(file)) return nullptr;
  const json saved = read_json_file(file);
  auto s = std::make_shared<Session>();
  s->id = id;
  s->dataset_id = saved.at("dataset_id").get<std::string>();
  s->ensemble_id = saved.at("ensemble_id").get<std::string>();
  s->grid = saved.at("grid");
  const auto& cfg = saved.at("config");
  s->config = {cfg.at("budget").get<std::size_t>(), cfg.at("m").get<double>(),
               cfg.at("pool_size").get<std::size_t>(), cfg.at("seed").get<std::uint64_t>()};
  s->created = saved.value("created", now_utc());
  s->updated = saved.value("updated", s->created);
  s->dataset = find_dataset(s->dataset_id);
  if (!s->dataset) return nullptr;

  std::shared_ptr<const ClusteringEnsemble> ensemble;
  {
    std::lock_guard lock(mutex_);
    if (auto it = ensembles_.find(s->ensemble_id); it != ensembles_.end()) ensemble = it->second->ensemble;
  }
  const fs::path stored = config_.store / "ensembles" / (s->ensemble_id + ".json");
  if (!ensemble && fs::exists(stored)) {
    ensemble = std::make_shared<const ClusteringEnsemble>(ensemble_from_json(read_json_file(stored)));
  }
  if (!ensemble) return nullptr;

  std::vector<std::size_t> all(s->dataset->normalized.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  s->active.emplace(ensemble, s->config, sample_pool(all, s->config));
  for (const auto& c : constraints_from_json(saved.at("answers"))) {
    const Pair expected = s->active->next_query();
    if (expected != c.pair) throw Error("session " + id + ": answer log does not replay");
    s->active->answer(c.pair, c.kind);
  }
  s->status = s->active->budget_exhausted() || s->active->pool_size() == 0 ? SessionStatus::done
                                                                            : SessionStatus::idle;
  std::lock_guard lock(mutex_);
  return sessions_.try_emplace(id, s).first->second;
}

std::shared_ptr<SessionService::Session> SessionService::find_session(const std::string& id) {
  {
    std::lock_guard lock(mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) return it->second;
  }
  auto s = restore_session(id);
  if (!s) throw not_found("session", id);
  return s;
}

json SessionService::record(const Session& s) const {
  json j = {{"id", s.id},
            {"status", to_string(s.status)},
            {"dataset_id", s.dataset_id},
            {"ensemble_id", s.ensemble_id},
            {"budget", s.config.budget},
            {"m", s.config.m},
            {"pool_size", s.config.sample_size},
            {"seed", s.config.seed},
            {"used", s.active ? s.active->used() : 0},
            {"ensemble_size", s.active ? json(s.active->ensemble().size()) : json()},
            {"created", s.created},
            {"updated", s.updated}};
  if (s.active) {
    j["skipped_configurations"] = s.active->ensemble().skipped.size();
    j["pending"] = s.active->pending() ? json::array({s.active->pending()->i, s.active->pending()->j}) : json();
  }
  if (!s.error.empty()) j["error"] = s.error;
  return j;
}

json SessionService::get_session(const std::string& id) {
  auto s = find_session(id);
  std::lock_guard lock(s->mutex);
  return record(*s);
}

bool SessionService::wait_ready(const std::string& id, std::chrono::milliseconds timeout) {
  auto s = find_session(id);
  std::unique_lock lock(s->mutex);
  return s->changed.wait_for(lock, timeout, [&] { return s->status != SessionStatus::generating; });
}

json SessionService::next_query(const std::string& id) {
  auto s = find_session(id);
  std::lock_guard lock(s->mutex);
  switch (s->status) {
    case SessionStatus::generating:
      throw ServiceError(409, "generating", "ensemble generation still in progress");
    case SessionStatus::failed:
      throw ServiceError(409, "failed", "ensemble generation failed: " + s->error);
    case SessionStatus::awaiting_answer:
      throw ServiceError(409, "query_pending", "a query is already awaiting an answer");
    case SessionStatus::done:
      throw ServiceError(410, "budget_exhausted",
                         "no queries left; see /sessions/" + s->id + "/result");
    case SessionStatus::idle:
      break;
  }
  Pair p;
  try {
    p = s->active->next_query();
  } catch (const InvalidState&) {
    s->status = SessionStatus::done;
    throw ServiceError(410, "budget_exhausted", "no queries left; see /sessions/" + s->id + "/result");
  }
  s->status = SessionStatus::awaiting_answer;
  s->updated = now_utc();

  const auto& d = *s->dataset;
  json instances = json::array();
  json projection = json::array();
  for (std::uint32_t idx : {p.i, p.j}) {
    const auto row = static_cast<Eigen::Index>(idx);
    std::vector<double> values(d.raw.instances.row(row).begin(), d.raw.instances.row(row).end());
    instances.push_back({{"index", idx}, {"values", values}});
    projection.push_back({d.projection(row, 0), d.projection.cols() > 1 ? d.projection(row, 1) : 0.0});
  }
  return {{"session", s->id},
          {"pair", {p.i, p.j}},
          {"feature_names", d.raw.feature_names},
          {"instances", std::move(instances)},
          {"projection", std::move(projection)},
          {"progress", {{"used", s->active->used()}, {"budget", s->config.budget}}}};
}

json SessionService::answer(const std::string& id, const json& body) {
  auto s = find_session(id);
  std::lock_guard lock(s->mutex);
  if (s->status != SessionStatus::awaiting_answer || !s->active->pending()) {
    throw ServiceError(409, "no_pending_query", "no query is awaiting an answer");
  }
  ConstraintKind kind;
  try {
    kind = parse_constraint_kind(body.at("kind").get<std::string>());
  } catch (const std::exception& e) {
    throw ServiceError(400, "bad_request", std::string("answer needs kind MUST_LINK or CANNOT_LINK: ") + e.what());
  }
  const Pair pending = *s->active->pending();
  if (body.contains("pair")) {
    const auto& pj = body.at("pair");
    if (!pj.is_array() || pj.size() != 2 ||
        Pair(pj[0].get<std::size_t>(), pj[1].get<std::size_t>()) != pending) {
      throw ServiceError(409, "pair_mismatch", "answer is for a pair that is not pending");
    }
  }
  s->active->answer(pending, kind);
  s->status = s->active->budget_exhausted() || s->active->pool_size() == 0 ? SessionStatus::done
                                                                            : SessionStatus::idle;
  s->updated = now_utc();
  persist(*s);

  json top = json::array();
  std::size_t rank = 1;
  for (std::size_t c : s->active->ranking(5)) {
    const auto& cl = s->active->ensemble()[c];
    top.push_back({{"rank", rank++},
                   {"index", c},
                   {"weight", s->active->weight(c)},
                   {"provenance", to_json(cl.provenance)},
                   {"description", describe(cl.provenance)}});
  }
  return {{"status", to_string(s->status)},
          {"progress", {{"used", s->active->used()}, {"budget", s->config.budget}}},
          {"top", std::move(top)}};
}

json SessionService::result(const std::string& id) {
  auto s = find_session(id);
  std::lock_guard lock(s->mutex);
  if (!s->active) {
    throw ServiceError(409, s->status == SessionStatus::failed ? "failed" : "generating",
                       "session has no ensemble yet");
  }
  const std::size_t c = s->active->result();
  const auto& cl = s->active->ensemble()[c];
  std::vector<std::size_t> sizes(static_cast<std::size_t>(cl.cluster_count()), 0);
  for (Label l : cl.assignment) {
    if (l != kNoise) ++sizes[static_cast<std::size_t>(l)];
  }
  json ari;
  const auto& d = s->dataset->raw;
  if (d.labeled()) {
    try {
      ari = evaluate_selected(cl, d, s->active->queried());
    } catch (const InvalidInput&) {
      ari = nullptr;
    }
  }
  return {{"session", s->id},
          {"index", c},
          {"provenance", to_json(cl.provenance)},
          {"description", describe(cl.provenance)},
          {"assignment", cl.assignment},
          {"cluster_sizes", sizes},
          {"noise", cl.noise_count()},
          {"weight", s->active->weight(c)},
          {"used", s->active->used()},
          {"budget", s->config.budget},
          {"no_constraints_yet", s->active->used() == 0},
          {"ari", ari}};
}

}  // namespace cobs::service
