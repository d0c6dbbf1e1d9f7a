#pragma once

// Runs a Service on a free local port for the lifetime of the object.

#include <httplib.h>

#include <stdexcept>
#include <thread>

#include "natded/service.hpp"
#include "natded/wire.hpp"

namespace natded::testing {

class RunningService {
 public:
  explicit RunningService(ServiceConfig config = {}) : service_(prepare(std::move(config))) {
    thread_ = std::thread([this] { service_.listen(); });
    port_ = service_.wait_until_ready();
    if (port_ <= 0) {
      thread_.join();
      throw std::runtime_error("service did not start");
    }
  }
  ~RunningService() {
    service_.stop();
    thread_.join();
  }

  int port() const { return port_; }
  Service& service() { return service_; }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

 private:
  static ServiceConfig prepare(ServiceConfig c) {
    c.bind = "127.0.0.1";
    c.port = 0;
    return c;
  }

  Service service_;
  std::thread thread_;
  int port_ = 0;
};

struct Reply {
  int status = 0;
  std::string body;
  std::string content_type;
  json data() const { return json::parse(body, nullptr, false); }
};

inline Reply to_reply(const httplib::Result& r) {
  if (!r) return {};
  return {r->status, r->body, r->get_header_value("Content-Type")};
}

inline Reply post(httplib::Client& c, const std::string& path, const json& body) {
  return to_reply(c.Post(path, body.dump(), "application/json"));
}

inline Reply get(httplib::Client& c, const std::string& path) { return to_reply(c.Get(path)); }

}  // namespace natded::testing
