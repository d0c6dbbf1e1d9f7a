#pragma once

// HTTP/JSON session service over the engine, prover and exporters.

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "natded/prover.hpp"
#include "natded/semantics.hpp"

namespace httplib {
class Server;
}

namespace natded {

struct ServiceConfig {
  std::string bind = "127.0.0.1";
  int port = 8080;
  // Empty: sessions live in memory only.
  std::filesystem::path data_dir;
  // Optional directory served at `/` (the browser client).
  std::filesystem::path static_dir;
  Budget prover;
  CountermodelOptions countermodel;
  std::size_t worker_threads = 8;

  // JSON object with the keys bind, port, data_dir, static_dir,
  // prover.{max_bound, wall_time_ms}, countermodel.{max_size, budget, seed},
  // worker_threads. Missing keys keep their defaults.
  static ServiceConfig from_json_text(const std::string& text);
  static ServiceConfig load(const std::filesystem::path& path);
  // NATDED_BIND, NATDED_PORT, NATDED_DATA_DIR, NATDED_STATIC_DIR,
  // NATDED_PROVER_MAX_BOUND, NATDED_PROVER_WALL_MS,
  // NATDED_COUNTERMODEL_MAX_SIZE, NATDED_COUNTERMODEL_BUDGET.
  void apply_environment();
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  const ServiceConfig& config() const;
  std::size_t session_count() const;

  // Registers the routes on an existing server.
  void mount(httplib::Server& server);

  // Binds config().bind:config().port (port 0 picks a free one) and
  // serves until stop(). Returns false when binding fails.
  bool listen();
  // Blocks until listen() is accepting; returns the bound port, or -1
  // when listen() gave up.
  int wait_until_ready() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Deletes persisted sessions whose last edit is older than `age`. Returns
// the number of sessions removed.
std::size_t prune_sessions(const std::filesystem::path& data_dir, std::chrono::hours age);

}  // namespace natded
