#include "cspmon/server.hpp"

#include <sys/socket.h>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <condition_variable>
#include <list>
#include <set>

#include "json.hpp"

#include "cspmon/error.hpp"

namespace cspmon {

namespace asio = boost::asio;
namespace beast = boost::beast;
using tcp = asio::ip::tcp;
using nlohmann::json;

std::string handle_request(Session& session, const Mapping& mapping, std::string_view line) {
  json req = json::parse(line.begin(), line.end(), nullptr, false);
  if (req.is_discarded()) return json{{"error", "malformed JSON"}}.dump();
  if (!req.is_object() || !req.contains("event") || !req["event"].is_string()) {
    return json{{"error", "expected an object with a string field \"event\""}}.dump();
  }
  MappedEvent mapped = map_event(mapping, req["event"].get<std::string>());
  Verdict v = session.step(to_trace_event(session.oracle(), mapped));
  if (is_pass(v)) return json{{"verdict", "pass"}}.dump();
  const Fail& f = std::get<Fail>(v);
  json acceptable = json::array();
  for (EventId id : f.counterexample.acceptable) acceptable.push_back(session.oracle().event_text(id));
  return json{{"verdict", "fail"},
              {"failing_event", f.failing_event},
              {"acceptable", acceptable},
              {"trace_len", f.counterexample.failing_trace.size()}}
      .dump();
}

std::string render_summary(const SessionSummary& s) {
  std::string out = "session " + std::to_string(s.id) + " closed: " + std::to_string(s.events) +
                    " events, verdict " + (s.passed ? "pass" : "fail");
  if (!s.passed) out += " at " + s.failing_event;
  return out;
}

struct MonitorServer::Impl {
  std::shared_ptr<const Lts> oracle;
  Mapping mapping;
  ServerOptions options;
  SummarySink on_close;

  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::uint16_t bound_port = 0;

  std::mutex mu;
  std::condition_variable cv;
  std::list<std::thread> workers;
  std::set<int> live_fds;
  std::size_t accepted = 0;
  std::size_t closed = 0;
  bool stopping = false;

  void serve_lines(tcp::socket& sock, Session& session, SessionSummary& sum) {
    asio::streambuf buf;
    boost::system::error_code ec;
    for (;;) {
      std::size_t n = asio::read_until(sock, buf, '\n', ec);
      if (ec && n == 0) {
        // Last line without a newline still counts.
        if (buf.size() == 0) return;
        n = buf.size();
      }
      std::string line(asio::buffers_begin(buf.data()), asio::buffers_begin(buf.data()) + n);
      buf.consume(n);
      while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
      if (!line.empty()) {
        std::string reply = answer(session, line, sum) + "\n";
        asio::write(sock, asio::buffer(reply), ec);
        if (ec) return;
      }
      if (ec) return;
    }
  }

  void serve_websocket(tcp::socket sock, Session& session, SessionSummary& sum) {
    beast::websocket::stream<tcp::socket> ws(std::move(sock));
    boost::system::error_code ec;
    ws.accept(ec);
    if (ec) return;
    for (;;) {
      beast::flat_buffer buf;
      ws.read(buf, ec);
      if (ec) return;
      std::string text = beast::buffers_to_string(buf.data());
      std::string replies;
      std::size_t start = 0;
      while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) replies += (replies.empty() ? "" : "\n") + answer(session, line, sum);
        start = end + 1;
      }
      if (replies.empty()) continue;
      ws.text(true);
      ws.write(asio::buffer(replies), ec);
      if (ec) return;
    }
  }

  std::string answer(Session& session, const std::string& line, SessionSummary& sum) {
    std::size_t before = session.trace().size();
    std::string reply = handle_request(session, mapping, line);
    if (session.trace().size() > before) ++sum.events;
    return reply;
  }

  void serve(tcp::socket sock, std::size_t id) {
    SessionSummary sum;
    sum.id = id;
    const int fd = sock.native_handle();
    try {
      Session session(oracle, options.mode);
      if (options.listen.protocol == Protocol::Tcp) {
        serve_lines(sock, session, sum);
      } else {
        serve_websocket(std::move(sock), session, sum);
      }
      Verdict v = session.verdict();
      if (auto* f = std::get_if<Fail>(&v)) {
        sum.passed = false;
        sum.failing_event = f->failing_event;
      }
    } catch (const std::exception&) {
      // Connection-level failure; the server carries on.
    }
    if (on_close) on_close(sum);
    std::lock_guard lock(mu);
    live_fds.erase(fd);
    ++closed;
    cv.notify_all();
  }

  void accept_next() {
    acceptor.async_accept([this](boost::system::error_code ec, tcp::socket sock) {
      if (ec) return;
      std::lock_guard lock(mu);
      if (stopping) return;
      std::size_t id = ++accepted;
      live_fds.insert(sock.native_handle());
      workers.emplace_back([this, s = std::move(sock), id]() mutable { serve(std::move(s), id); });
      if (options.max_sessions == 0 || accepted < options.max_sessions) accept_next();
    });
  }
};

MonitorServer::MonitorServer(std::shared_ptr<const Lts> oracle, Mapping mapping,
                             ServerOptions options, SummarySink on_close)
    : impl_(std::make_unique<Impl>()) {
  impl_->oracle = std::move(oracle);
  impl_->mapping = std::move(mapping);
  impl_->options = std::move(options);
  impl_->on_close = std::move(on_close);
}

MonitorServer::~MonitorServer() {
  stop();
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
}

void MonitorServer::start() {
  boost::system::error_code ec;
  auto addr = asio::ip::make_address(impl_->options.listen.host, ec);
  if (ec) throw BindError("invalid host '" + impl_->options.listen.host + "'");
  tcp::endpoint ep(addr, impl_->options.listen.port);
  impl_->acceptor.open(ep.protocol(), ec);
  if (!ec) impl_->acceptor.set_option(tcp::acceptor::reuse_address(true), ec);
  if (!ec) impl_->acceptor.bind(ep, ec);
  if (!ec) impl_->acceptor.listen(asio::socket_base::max_listen_connections, ec);
  if (ec) {
    throw BindError("cannot listen on " + impl_->options.listen.host + ":" +
                    std::to_string(impl_->options.listen.port) + ": " + ec.message());
  }
  impl_->bound_port = impl_->acceptor.local_endpoint().port();
  impl_->accept_next();
}

std::uint16_t MonitorServer::port() const { return impl_->bound_port; }

void MonitorServer::run() {
  std::thread io_thread([this] { impl_->io.run(); });
  {
    std::unique_lock lock(impl_->mu);
    impl_->cv.wait(lock, [this] {
      return impl_->stopping ||
             (impl_->options.max_sessions > 0 && impl_->closed >= impl_->options.max_sessions);
    });
  }
  stop();
  io_thread.join();
  for (auto& t : impl_->workers) {
    if (t.joinable()) t.join();
  }
}

void MonitorServer::stop() {
  {
    std::lock_guard lock(impl_->mu);
    impl_->stopping = true;
    for (int fd : impl_->live_fds) ::shutdown(fd, SHUT_RDWR);
    impl_->cv.notify_all();
  }
  asio::post(impl_->io, [this] {
    boost::system::error_code ec;
    impl_->acceptor.close(ec);
  });
  impl_->io.stop();
}

}  // namespace cspmon
