#include "natded/service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <thread>

#include "natded/engine.hpp"
#include "natded/export.hpp"
#include "natded/wire.hpp"

namespace natded {

// ---- configuration ---------------------------------------------------------

ServiceConfig ServiceConfig::from_json_text(const std::string& text) {
  ServiceConfig c;
  json j = json::parse(text);
  if (!j.is_object()) throw Error("BadConfig", "configuration must be a JSON object");
  c.bind = j.value("bind", c.bind);
  c.port = j.value("port", c.port);
  if (j.contains("data_dir")) c.data_dir = j["data_dir"].get<std::string>();
  if (j.contains("static_dir")) c.static_dir = j["static_dir"].get<std::string>();
  c.worker_threads = j.value("worker_threads", c.worker_threads);
  if (j.contains("prover")) {
    const json& p = j["prover"];
    c.prover.max_bound = p.value("max_bound", c.prover.max_bound);
    c.prover.wall_time = std::chrono::milliseconds(p.value("wall_time_ms", c.prover.wall_time.count()));
  }
  if (j.contains("countermodel")) {
    const json& m = j["countermodel"];
    c.countermodel.max_size = m.value("max_size", c.countermodel.max_size);
    c.countermodel.budget = m.value("budget", c.countermodel.budget);
    c.countermodel.seed = m.value("seed", c.countermodel.seed);
  }
  return c;
}

ServiceConfig ServiceConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("BadConfig", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return from_json_text(buf.str());
  } catch (const json::exception& e) {
    throw Error("BadConfig", path.string() + ": " + e.what());
  }
}

void ServiceConfig::apply_environment() {
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  auto number = [](const std::string& name, const std::string& v) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw Error("BadConfig", name + " is not a number: " + v);
    }
  };
  if (auto v = env("NATDED_BIND")) bind = *v;
  if (auto v = env("NATDED_PORT")) port = static_cast<int>(number("NATDED_PORT", *v));
  if (auto v = env("NATDED_DATA_DIR")) data_dir = *v;
  if (auto v = env("NATDED_STATIC_DIR")) static_dir = *v;
  if (auto v = env("NATDED_PROVER_MAX_BOUND")) prover.max_bound = number("NATDED_PROVER_MAX_BOUND", *v);
  if (auto v = env("NATDED_PROVER_WALL_MS")) {
    prover.wall_time = std::chrono::milliseconds(number("NATDED_PROVER_WALL_MS", *v));
  }
  if (auto v = env("NATDED_COUNTERMODEL_MAX_SIZE")) countermodel.max_size = number("NATDED_COUNTERMODEL_MAX_SIZE", *v);
  if (auto v = env("NATDED_COUNTERMODEL_BUDGET")) countermodel.budget = number("NATDED_COUNTERMODEL_BUDGET", *v);
}

// ---- sessions --------------------------------------------------------------

namespace {

std::string now_iso8601() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  static const char* hex = "0123456789abcdef";
  std::string id;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t x = rng();
    for (int k = 0; k < 16; ++k, x >>= 4) id += hex[x & 15];
  }
  return id;
}

bool valid_session_id(const std::string& id) {
  return !id.empty() && id.find_first_not_of("0123456789abcdef") == std::string::npos;
}

struct Session {
  std::string id;
  std::filesystem::path log;

  // Held for the whole of an edit; a second writer is turned away.
  std::mutex writer;
  // Guards the fields below; held only briefly.
  mutable std::mutex data;
  ProofState state;
  std::uint64_t version = 0;
  std::string created;
  std::string updated;
  std::optional<Verdictmap> verdicts;  // valid for `version`
};

struct HttpError {
  int status;
  json body;
};

[[noreturn]] void fail(int status, const std::string& code, const std::string& message, json detail = json::object()) {
  throw HttpError{status, wire_error(code, message, detail)};
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) fail(400, "BadRequest", "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    fail(400, "BadRequest", std::string("malformed JSON: ") + e.what());
  }
}

std::string require_string(const json& body, const char* key) {
  if (!body.contains(key) || !body[key].is_string()) fail(400, "BadRequest", std::string("missing string field '") + key + "'");
  return body[key].get<std::string>();
}

Formula surface_formula(const std::string& text, const char* field) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    fail(400, "ParseError", e.what(), {{"field", field}, {"position", e.position()}});
  }
}

void append_event(const Session& s, const json& event) {
  if (s.log.empty()) return;
  std::ofstream out(s.log, std::ios::app);
  out << event.dump() << '\n';
  out.flush();
  if (!out) throw Error("PersistFailed", "cannot write " + s.log.string());
}

void apply_event(Session& s, const json& ev) {
  const std::string op = ev.at("op");
  if (op == "create") {
    s.state = ProofState::new_session(parse_deep_formula(ev.at("goal").get<std::string>()));
    s.created = ev.value("at", std::string());
  } else if (op == "import") {
    s.state = replay(parse_proof(ev.at("proof").get<std::string>()));
    s.created = ev.value("at", std::string());
  } else if (op == "apply") {
    RuleRequest req;
    req.node = ev.at("node");
    auto rule = rule_from_name(ev.at("rule").get<std::string>());
    if (!rule) throw Error("BadLog", "unknown rule in log");
    req.rule = *rule;
    if (ev.contains("witness")) req.witness = parse_deep_term(ev["witness"].get<std::string>());
    if (ev.contains("formula")) req.formula = parse_deep_formula(ev["formula"].get<std::string>());
    ApplyOptions options;
    if (ev.contains("constant")) options.constant = ev["constant"].get<std::string>();
    s.state.apply_rule(req, options);
  } else if (op == "undo") {
    s.state.undo();
  } else {
    throw Error("BadLog", "unknown event " + op);
  }
  if (op != "create" && op != "import") ++s.version;
  s.updated = ev.value("at", s.updated);
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;
  std::atomic<int> bound_port{0};
  std::atomic<bool> listen_done{false};

  mutable std::shared_mutex index_mu;
  std::map<std::string, std::shared_ptr<Session>> sessions;

  explicit Impl(ServiceConfig c) : config(std::move(c)) {
    if (!config.data_dir.empty()) {
      std::filesystem::create_directories(config.data_dir);
      load_sessions();
    }
  }

  void load_sessions() {
    for (const auto& entry : std::filesystem::directory_iterator(config.data_dir)) {
      if (entry.path().extension() != ".jsonl") continue;
      std::string id = entry.path().stem().string();
      if (!valid_session_id(id)) continue;
      auto s = std::make_shared<Session>();
      s->id = id;
      s->log = entry.path();
      std::ifstream in(entry.path());
      std::string line;
      bool started = false;
      try {
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          json ev;
          try {
            ev = json::parse(line);
          } catch (const json::parse_error&) {
            break;  // torn final write
          }
          apply_event(*s, ev);
          started = true;
        }
      } catch (const std::exception& e) {
        std::cerr << "natded: skipping session " << id << ": " << e.what() << '\n';
        continue;
      }
      if (started) sessions.emplace(id, std::move(s));
    }
  }

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(index_mu);
    auto it = sessions.find(id);
    if (it == sessions.end()) fail(404, "UnknownSession", "no session " + id);
    return it->second;
  }

  std::shared_ptr<Session> open_session(ProofState state, const json& first_event) {
    auto s = std::make_shared<Session>();
    s->state = std::move(state);
    s->created = s->updated = first_event.value("at", std::string());
    std::unique_lock lock(index_mu);
    do {
      s->id = new_session_id();
    } while (sessions.count(s->id));
    if (!config.data_dir.empty()) s->log = config.data_dir / (s->id + ".jsonl");
    append_event(*s, first_event);
    sessions.emplace(s->id, s);
    return s;
  }

  static json state_json(const Session& s) {
    json out = wire_state(s.state, s.verdicts ? &*s.verdicts : nullptr);
    out["id"] = s.id;
    out["version"] = s.version;
    out["created"] = s.created;
    out["updated"] = s.updated;
    return out;
  }

  json snapshot(const Session& s) const {
    std::lock_guard lock(s.data);
    return state_json(s);
  }

  // ---- handlers ----

  json create(const json& body) {
    Formula goal = surface_formula(require_string(body, "goal"), "goal");
    ProofState state = ProofState::new_session(goal);
    json ev{{"op", "create"}, {"goal", render_formula(goal, PrintStyle::DeepEmbed)}, {"at", now_iso8601()}};
    auto s = open_session(std::move(state), ev);
    return {{"id", s->id}, {"state", snapshot(*s)}};
  }

  json import(const json& body) {
    const std::string text = require_string(body, "proof");
    Derivation d;
    try {
      d = parse_proof(text);
    } catch (const FormatError& e) {
      fail(400, e.code(), e.what(), {{"line", e.line()}, {"column", e.column()}});
    } catch (const InvariantError& e) {
      fail(400, e.code(), e.what(), {{"line", e.line()}});
    }
    if (!d.assumptions.empty()) fail(400, "Rejected", "the root of an imported proof must have no assumptions");
    CheckReport report = check(d);
    if (!report.ok) fail(400, "Rejected", "the kernel rejects the proof", wire_check_failure(*report.failure));
    ProofState state = replay(d);
    json ev{{"op", "import"}, {"proof", text}, {"at", now_iso8601()}};
    auto s = open_session(std::move(state), ev);
    return {{"id", s->id}, {"state", snapshot(*s)}};
  }

  template <class Edit>
  json edit(const std::string& id, const json& body, Edit&& make_edit) {
    auto s = find(id);
    std::unique_lock writer(s->writer, std::try_to_lock);
    if (!writer.owns_lock()) fail(409, "Conflict", "another edit of this session is in progress");
    ProofState next;
    {
      std::lock_guard lock(s->data);
      if (body.contains("version") && body["version"] != s->version) {
        fail(409, "Conflict", "the session has changed", {{"version", s->version}});
      }
      next = s->state;
    }
    json ev = make_edit(next);
    ev["at"] = now_iso8601();
    append_event(*s, ev);
    std::lock_guard lock(s->data);
    s->state = std::move(next);
    ++s->version;
    s->updated = ev["at"];
    s->verdicts.reset();
    return state_json(*s);
  }

  json apply(const std::string& id, const json& body) {
    return edit(id, body, [&](ProofState& state) {
      if (!body.contains("line") || !body["line"].is_number_unsigned()) fail(400, "BadRequest", "missing field 'line'");
      const std::size_t line = body["line"];
      auto lines = state.lines();
      if (line == 0 || line > lines.size()) {
        fail(400, "UnknownNode", "no line " + std::to_string(line), {{"line", line}});
      }
      RuleRequest req;
      req.node = lines[line - 1].node;
      const std::string name = require_string(body, "rule");
      auto rule = rule_from_name(name);
      if (!rule) fail(400, "UnknownRule", "no rule named " + name);
      req.rule = *rule;
      if (body.contains("witness") && !body["witness"].is_null()) {
        const std::string text = require_string(body, "witness");
        try {
          req.witness = parse_term(text);
        } catch (const ParseError& e) {
          fail(400, "ParseError", e.what(), {{"field", "witness"}, {"position", e.position()}});
        }
      }
      if (body.contains("formula") && !body["formula"].is_null()) {
        req.formula = surface_formula(require_string(body, "formula"), "formula");
      }
      try {
        state.apply_rule(req);
      } catch (const RuleError& e) {
        fail(400, e.code(), e.what(), {{"line", line}, {"rule", name}});
      }
      json ev{{"op", "apply"}, {"node", req.node}, {"rule", name}};
      if (req.witness) ev["witness"] = render_term(*req.witness, PrintStyle::DeepEmbed);
      if (req.formula) ev["formula"] = render_formula(*req.formula, PrintStyle::DeepEmbed);
      const Node& n = state.node(req.node);
      if (rule_introduces_constant(*rule)) ev["constant"] = n.applied->witness->name();
      return ev;
    });
  }

  json undo(const std::string& id, const json& body) {
    return edit(id, body, [&](ProofState& state) {
      try {
        state.undo();
      } catch (const RuleError& e) {
        fail(400, e.code(), e.what());
      }
      return json{{"op", "undo"}};
    });
  }

  json feasibility(const std::string& id) {
    auto s = find(id);
    ProofState state;
    std::uint64_t version;
    {
      std::lock_guard lock(s->data);
      if (s->verdicts) return {{"version", s->version}, {"verdicts", wire_verdicts(s->state, *s->verdicts)}};
      state = s->state;
      version = s->version;
    }
    std::vector<std::pair<std::size_t, Sequent>> leaves;
    for (NodeId leaf : state.open_leaves()) {
      const Node& n = state.node(leaf);
      leaves.push_back({leaf, Sequent{n.assumptions, n.goal}});
    }
    Verdictmap verdicts = assess(leaves, config.prover);
    {
      std::lock_guard lock(s->data);
      if (s->version == version) s->verdicts = verdicts;
    }
    return {{"version", version}, {"verdicts", wire_verdicts(state, verdicts)}};
  }

  ProofState current(const std::string& id) {
    auto s = find(id);
    std::lock_guard lock(s->data);
    return s->state;
  }

  std::string export_proof(const std::string& id, bool partial) {
    ProofState state = current(id);
    if (state.is_complete()) return serialize_proof(state.extract());
    if (!partial) fail(409, "Incomplete", "the proof has open goals; ask for ?partial=true");
    return serialize_partial(state);
  }

  std::string export_isar(const std::string& id, bool scratch) {
    ProofState state = current(id);
    if (!state.is_complete()) fail(409, "Incomplete", "the proof has open goals");
    try {
      Derivation d = state.extract();
      return scratch ? to_isar_open(d) : to_isar_closed(d);
    } catch (const ExportError& e) {
      fail(409, e.code(), e.what());
    }
  }

  json countermodel(const json& body) {
    Formula f = surface_formula(require_string(body, "formula"), "formula");
    CountermodelOptions options = config.countermodel;
    if (body.contains("max_size")) {
      if (!body["max_size"].is_number_unsigned()) fail(400, "BadRequest", "max_size must be a positive integer");
      options.max_size = body["max_size"];
      if (options.max_size < options.min_size) fail(400, "BadRequest", "max_size must be at least 1");
    }
    json out = wire_countermodel(find_countermodel(f, options));
    out["formula"] = render_formula(f, PrintStyle::Named);
    return out;
  }

  // ---- routing ----

  template <class Fn>
  static httplib::Server::Handler json_route(Fn fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      respond(res, [&] {
        json out = fn(req);
        res.set_content(out.dump(), "application/json");
      });
    };
  }

  template <class Fn>
  static void respond(httplib::Response& res, Fn&& body) {
    try {
      body();
      res.status = 200;
    } catch (const HttpError& e) {
      res.status = e.status;
      res.set_content(e.body.dump(), "application/json");
    } catch (const ParseError& e) {
      res.status = 400;
      res.set_content(wire_error(e.code(), e.what(), {{"position", e.position()}}).dump(), "application/json");
    } catch (const Error& e) {
      res.status = e.code() == "PersistFailed" ? 500 : 400;
      res.set_content(wire_error(e.code(), e.what()).dump(), "application/json");
    } catch (const json::exception& e) {
      res.status = 400;
      res.set_content(wire_error("BadRequest", e.what()).dump(), "application/json");
    }
  }

  void mount(httplib::Server& svr) {
    const std::string sid = "/api/session/([0-9a-f]+)";
    svr.Post("/api/session", json_route([this](const httplib::Request& r) { return create(parse_body(r)); }));
    svr.Post("/api/session/import", json_route([this](const httplib::Request& r) { return import(parse_body(r)); }));
    svr.Get(sid, json_route([this](const httplib::Request& r) { return snapshot(*find(r.matches[1])); }));
    svr.Post(sid + "/apply",
             json_route([this](const httplib::Request& r) { return apply(r.matches[1], parse_body(r)); }));
    svr.Post(sid + "/undo", json_route([this](const httplib::Request& r) { return undo(r.matches[1], parse_body(r)); }));
    svr.Get(sid + "/feasibility", json_route([this](const httplib::Request& r) { return feasibility(r.matches[1]); }));
    svr.Get(sid + "/export/proof", [this](const httplib::Request& r, httplib::Response& res) {
      respond(res, [&] {
        const bool partial = r.has_param("partial") && r.get_param_value("partial") == "true";
        res.set_content(export_proof(r.matches[1], partial), std::string(kProofMediaType));
      });
    });
    svr.Get(sid + "/export/isar", [this](const httplib::Request& r, httplib::Response& res) {
      respond(res, [&] { res.set_content(export_isar(r.matches[1], false), std::string(kIsarMediaType)); });
    });
    svr.Get(sid + "/export/scratch", [this](const httplib::Request& r, httplib::Response& res) {
      respond(res, [&] { res.set_content(export_isar(r.matches[1], true), std::string(kIsarMediaType)); });
    });
    svr.Post("/api/countermodel",
             json_route([this](const httplib::Request& r) { return countermodel(parse_body(r)); }));
    svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const char* code = res.status == 404 ? "NotFound" : "HttpError";
      res.set_content(wire_error(code, httplib::status_message(res.status)).dump(), "application/json");
    });
    if (!config.static_dir.empty()) svr.set_mount_point("/", config.static_dir.string());
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {
  const std::size_t threads = std::max<std::size_t>(impl_->config.worker_threads, 2);
  impl_->server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  impl_->mount(impl_->server);
}

Service::~Service() { stop(); }

const ServiceConfig& Service::config() const { return impl_->config; }

std::size_t Service::session_count() const {
  std::shared_lock lock(impl_->index_mu);
  return impl_->sessions.size();
}

void Service::mount(httplib::Server& server) { impl_->mount(server); }

bool Service::listen() {
  auto& svr = impl_->server;
  int port = impl_->config.port;
  bool ok = true;
  if (port == 0) {
    port = svr.bind_to_any_port(impl_->config.bind);
    ok = port >= 0;
  } else {
    ok = svr.bind_to_port(impl_->config.bind, port);
  }
  if (ok) {
    impl_->bound_port = port;
    ok = svr.listen_after_bind();
  }
  impl_->listen_done = true;
  return ok;
}

int Service::wait_until_ready() const {
  while (!impl_->server.is_running() && !impl_->listen_done) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  return impl_->server.is_running() ? impl_->bound_port.load() : -1;
}

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

std::size_t prune_sessions(const std::filesystem::path& data_dir, std::chrono::hours age) {
  namespace fs = std::filesystem;
  std::size_t removed = 0;
  if (!fs::is_directory(data_dir)) return 0;
  const auto cutoff = fs::file_time_type::clock::now() - age;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    if (fs::last_write_time(entry.path()) < cutoff && fs::remove(entry.path())) ++removed;
  }
  return removed;
}

}  // namespace natded
