#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cobs/active.hpp"
#include "cobs/dataset.hpp"
#include "cobs/ensemble.hpp"
#include "cobs/error.hpp"
#include "cobs/io.hpp"

namespace httplib {
class Server;
}

namespace cobs::service {

/// Error carrying the HTTP status it maps to; rendered as {code, message}.
class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

enum class SessionStatus { generating, idle, awaiting_answer, done, failed };
std::string to_string(SessionStatus s);

struct ServiceConfig {
  std::filesystem::path store;  // content-addressed file store
  unsigned workers = 1;         // ensemble generation threads
};

/// Datasets, ensembles and interactive active-selection sessions.
///
/// Datasets are keyed by the hash of their upload, ensembles by dataset and
/// grid, so identical requests reuse stored results. Ensembles are generated
/// in the background; a session stays `generating` until its ensemble is
/// ready. Each session admits at most one pending query. Sessions are
/// persisted as their answer log and rebuilt by replay after a restart.
class SessionService {
 public:
  explicit SessionService(ServiceConfig config);
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  json create_dataset(std::string_view csv, const std::optional<std::string>& label_column,
                      const std::string& name = {});
  json get_dataset(const std::string& id);

  /// Request fields: dataset_id, grid ("default" or object), budget, m,
  /// pool_size, seed. Missing fields take the active-selection defaults.
  json start_session(const json& request);
  json get_session(const std::string& id);
  json next_query(const std::string& id);
  /// Body: {"kind": "MUST_LINK" | "CANNOT_LINK", "pair": [i, j] (optional)}.
  json answer(const std::string& id, const json& body);
  json result(const std::string& id);

  /// Blocks until the session leaves `generating`; false on timeout.
  bool wait_ready(const std::string& id, std::chrono::milliseconds timeout);

 private:
  struct DatasetEntry;
  struct EnsembleEntry;
  struct Session;

  std::shared_ptr<DatasetEntry> find_dataset(const std::string& id);
  std::shared_ptr<Session> find_session(const std::string& id);
  std::shared_ptr<Session> restore_session(const std::string& id);
  void activate(Session& s, std::shared_ptr<const ClusteringEnsemble> ensemble);
  void on_generated(const std::string& ensemble_id);
  void persist(const Session& s) const;
  json record(const Session& s) const;

  ServiceConfig config_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<DatasetEntry>> datasets_;
  std::map<std::string, std::shared_ptr<EnsembleEntry>> ensembles_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t session_counter_ = 0;
  std::vector<std::jthread> generators_;  // declared last: joined first
};

/// Binds the JSON API: POST /datasets, GET /datasets/{id}, POST /sessions,
/// GET /sessions/{id}, GET /sessions/{id}/query, POST /sessions/{id}/answer,
/// GET /sessions/{id}/result.
void register_routes(httplib::Server& server, SessionService& service);

}  // namespace cobs::service
