#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "cspmon/config.hpp"
#include "cspmon/mapping.hpp"
#include "cspmon/monitor.hpp"

namespace cspmon {

/// Handles one NDJSON request line against `session` and returns the reply
/// (without the trailing newline). Malformed requests get an error reply and
/// leave the session untouched.
std::string handle_request(Session& session, const Mapping& mapping, std::string_view line);

struct SessionSummary {
  std::size_t id = 0;
  std::size_t events = 0;
  bool passed = true;
  std::string failing_event;
};

std::string render_summary(const SessionSummary& s);

struct ServerOptions {
  ListenInput listen;
  Mode mode = Mode::Strict;
  /// Stop accepting after this many connections have closed; 0 = never.
  std::size_t max_sessions = 0;
};

/// Online monitor: every connection gets its own Session over the shared
/// oracle. One thread per connection; replies are ordered with requests.
class MonitorServer {
 public:
  using SummarySink = std::function<void(const SessionSummary&)>;

  MonitorServer(std::shared_ptr<const Lts> oracle, Mapping mapping, ServerOptions options,
                SummarySink on_close = {});
  ~MonitorServer();
  MonitorServer(const MonitorServer&) = delete;
  MonitorServer& operator=(const MonitorServer&) = delete;

  /// Binds and listens. Throws BindError.
  void start();
  /// Bound port (useful with port 0). Valid after start().
  std::uint16_t port() const;
  /// Accept loop; returns after stop() or once max_sessions have closed.
  void run();
  /// Thread-safe; makes run() return and closes live connections.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cspmon
