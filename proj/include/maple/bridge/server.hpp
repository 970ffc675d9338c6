#pragma once

// Websocket service for tutor/learner consoles.
//
// One io_context thread owns the session and every connection, so all
// session input (console actions, clock ticks) is totally ordered. Each
// connection has its own outbound FIFO; a client that stops reading is
// dropped once its queue overflows instead of stalling the others.

#include <chrono>
#include <deque>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "maple/bridge/protocol.hpp"
#include "maple/report.hpp"
#include "maple/session.hpp"

namespace maple::bridge {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = boost::beast::http;
namespace websocket = boost::beast::websocket;
using tcp = boost::asio::ip::tcp;

class ServiceError : public Error {
 public:
  using Error::Error;
};

enum class Role { tutor, learner, observer };

inline std::string_view to_string(Role r) {
  switch (r) {
    case Role::tutor: return "tutor";
    case Role::learner: return "learner";
    case Role::observer: return "observer";
  }
  return "tutor";
}

inline std::optional<Role> role_from_string(std::string_view s) {
  if (s == "tutor") return Role::tutor;
  if (s == "learner") return Role::learner;
  if (s == "observer") return Role::observer;
  return std::nullopt;
}

struct ServiceOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 0;  // 0 picks a free port
  // Session clock granularity; 0 means the clock only moves via advance().
  std::chrono::milliseconds tick{10};
  std::chrono::milliseconds heartbeat{5000};
  std::size_t max_outbound_queue = 4096;
};

using SessionFactory = std::function<std::pair<Session, std::vector<Effect>>()>;

struct ConnectionState {
  std::uint64_t id = 0;
  Role role = Role::tutor;
  bool subscribed = false;  // after hello
  InboundChannel inbound;
  OutboundChannel outbound;
};

class Service;

namespace detail {

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Service& service, std::uint64_t id, std::size_t max_queue)
      : ws_(std::move(socket)), service_(service), max_queue_(max_queue) {
    state.id = id;
  }

  void start() { read_request(); }

  void send(std::string frame) {
    if (closed_) return;
    if (queue_.size() >= max_queue_) {
      close();
      return;
    }
    queue_.push_back(std::move(frame));
    if (queue_.size() == 1 && accepted_) write_next();
  }

  void close();

  ConnectionState state;

 private:
  void read_request() {
    auto self = shared_from_this();
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self](beast::error_code ec, std::size_t) { self->on_request(ec); });
  }

  void on_request(beast::error_code ec);

  void reject(http::status status) {
    auto res = std::make_shared<http::response<http::string_body>>(status, request_.version());
    res->set(http::field::content_type, "text/plain");
    res->body() = "websocket endpoint is /ws\n";
    res->prepare_payload();
    res->keep_alive(false);
    auto self = shared_from_this();
    http::async_write(ws_.next_layer(), *res, [self, res](beast::error_code, std::size_t) {
      beast::error_code ignored;
      self->ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
    });
  }

  void read_frame() {
    auto self = shared_from_this();
    ws_.async_read(buffer_, [self](beast::error_code ec, std::size_t) { self->on_frame(ec); });
  }

  void on_frame(beast::error_code ec);

  void write_next() {
    auto self = shared_from_this();
    ws_.text(true);
    ws_.async_write(asio::buffer(queue_.front()), [self](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty() && !self->closed_) self->write_next();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  Service& service_;
  std::size_t max_queue_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::deque<std::string> queue_;
  std::optional<Role> role_hint_;
  bool accepted_ = false;
  bool closed_ = false;
};

}  // namespace detail

class Service {
 public:
  Service(SessionFactory factory, ServiceOptions options)
      : options_(std::move(options)), acceptor_(io_), ticker_(io_), heartbeat_(io_) {
    auto [session, effects] = factory();
    session_.emplace(std::move(session));
    for (auto& e : effects) history_.push_back(to_json(e));
    last_view_ = view_key();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;
  ~Service() { stop(); }

  // Binds and starts serving on a background thread. Throws
  // ServiceError{PORT_IN_USE} when the port is taken.
  void start() {
    tcp::endpoint endpoint(asio::ip::make_address(options_.address), options_.port);
    try {
      acceptor_.open(endpoint.protocol());
      acceptor_.set_option(asio::socket_base::reuse_address(true));
      acceptor_.bind(endpoint);
      acceptor_.listen();
    } catch (const boost::system::system_error& e) {
      if (e.code() == asio::error::address_in_use)
        throw ServiceError("PORT_IN_USE", "port " + std::to_string(options_.port) + " is already in use");
      throw ServiceError("BIND_FAILED", e.what());
    }
    port_ = acceptor_.local_endpoint().port();
    started_at_ = std::chrono::steady_clock::now();
    accept();
    if (options_.tick.count() > 0) schedule_tick();
    if (options_.heartbeat.count() > 0) schedule_heartbeat();
    thread_ = std::thread([this] { io_.run(); });
  }

  unsigned short port() const { return port_; }

  void stop() {
    if (!thread_.joinable()) return;
    asio::post(io_, [this] {
      beast::error_code ignored;
      acceptor_.close(ignored);
      ticker_.cancel();
      heartbeat_.cancel();
      auto open = std::move(connections_);
      connections_.clear();
      for (auto& [id, c] : open) c->close();
      io_.stop();
    });
    thread_.join();
  }

  // Moves the session clock by `ms` (manual-clock services).
  void advance(TimeMs ms) {
    call([this, ms] { feed(Tick{ms}); });
  }

  SessionLog log() {
    return call([this] { return session_->log(); });
  }
  Json state() {
    return call([this] { return state_payload(*session_); });
  }
  // Every effect payload broadcast so far, in emission order.
  std::vector<Json> effect_history() {
    return call([this] { return history_; });
  }
  std::size_t connection_count() {
    return call([this] { return connections_.size(); });
  }
  bool finished() {
    return call([this] { return session_->finished(); });
  }
  // Console frames handled so far (including rejected ones).
  std::size_t frames_handled() {
    return call([this] { return frames_handled_; });
  }

 private:
  friend class detail::Connection;

  template <class F>
  auto call(F f) -> decltype(f()) {
    using R = decltype(f());
    if (!thread_.joinable()) return f();
    std::packaged_task<R()> task(std::move(f));
    auto fut = task.get_future();
    asio::post(io_, [&task] { task(); });
    return fut.get();
  }

  void accept() {
    acceptor_.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      auto conn = std::make_shared<detail::Connection>(std::move(socket), *this, ++next_id_,
                                                       options_.max_outbound_queue);
      connections_[conn->state.id] = conn;
      conn->start();
      accept();
    });
  }

  void schedule_tick() {
    ticker_.expires_after(options_.tick);
    ticker_.async_wait([this](beast::error_code ec) {
      if (ec) return;
      const TimeMs now = wall_now();
      if (now > session_->wall_ms()) feed(Tick{now - session_->wall_ms()});
      schedule_tick();
    });
  }

  void schedule_heartbeat() {
    heartbeat_.expires_after(options_.heartbeat);
    heartbeat_.async_wait([this](beast::error_code ec) {
      if (ec) return;
      Json status{{"connections", connections_.size()},
                  {"phase", std::string(to_string(session_->phase()))},
                  {"state_id", session_->current_state_id() ? Json(*session_->current_state_id()) : Json(nullptr)},
                  {"clock_ms", session_->clock_ms()},
                  {"wall_ms", session_->wall_ms()}};
      broadcast(op::status, status);
      schedule_heartbeat();
    });
  }

  TimeMs wall_now() const {
    if (options_.tick.count() == 0) return session_->wall_ms();
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 started_at_)
        .count();
  }

  std::string view_key() const {
    return session_->current_state_id().value_or("") + "|" + std::string(to_string(session_->phase()));
  }

  // Steps the session and broadcasts what it emitted. Returns the rejection
  // when the event was illegal.
  std::optional<IllegalEvent> feed(const Event& event) {
    std::vector<Effect> effects;
    std::optional<IllegalEvent> rejected;
    try {
      effects = session_->step(event);
    } catch (const IllegalEvent& e) {
      effects = session_->record_protocol_error(e);
      rejected = e;
    }
    publish(effects);
    return rejected;
  }

  void publish(const std::vector<Effect>& effects) {
    for (const auto& e : effects) {
      Json payload = to_json(e);
      history_.push_back(payload);
      if (const auto* s = std::get_if<EmitSummary>(&e))
        broadcast(op::summary, to_json(s->summary));
      else
        broadcast(op::effect, std::move(payload));
    }
    const std::string key = view_key();
    if (key != last_view_) {
      last_view_ = key;
      broadcast(op::state, state_payload(*session_));
    }
  }

  void broadcast(std::string_view op_name, const Json& payload) {
    for (auto& [id, c] : connections_)
      if (c->state.subscribed) send(*c, op_name, payload);
  }

  void send(detail::Connection& c, std::string_view op_name, Json payload) {
    c.send(encode_message(c.state.outbound.make(op_name, std::move(payload))));
  }

  void send_error(detail::Connection& c, const std::string& code, const std::string& message) {
    send(c, op::error, Json{{"code", code}, {"message", message}});
  }

  void on_frame(detail::Connection& c, std::string_view frame, std::optional<Role> query_role) {
    const TimeMs receipt = wall_now();
    ++frames_handled_;
    WireMessage msg;
    try {
      msg = c.state.inbound.decode(frame);
    } catch (const ProtocolError& e) {
      send_error(c, e.code(), e.what());
      return;
    }

    if (msg.op == op::hello) {
      if (auto r = msg.payload.find("role"); r != msg.payload.end())
        c.state.role = *role_from_string(r->get<std::string>());
      else if (query_role)
        c.state.role = *query_role;
      c.state.subscribed = true;
      const Scenario& sc = session_->scenario();
      send(c, op::welcome,
           Json{{"connection", c.state.id},
                {"role", std::string(to_string(c.state.role))},
                {"scenario", Json{{"id", sc.id}, {"title", sc.title}, {"target_words", sc.target_words}}},
                {"state", state_payload(*session_)}});
      return;
    }
    if (msg.op != op::action) {
      send_error(c, "UNEXPECTED_OP", "op '" + msg.op + "' is not accepted from consoles");
      return;
    }
    if (!c.state.subscribed) {
      send_error(c, "HELLO_REQUIRED", "send hello before actions");
      return;
    }
    const auto type = msg.payload.at("type").get<std::string>();
    if (c.state.role == Role::observer) {
      send_error(c, "FORBIDDEN", "observers cannot act");
      return;
    }
    if (type != "answer") {
      if (c.state.role != Role::tutor) {
        send_error(c, "FORBIDDEN", "only tutors can " + type);
        return;
      }
      if (pause_authority_ && *pause_authority_ != c.state.id && connections_.count(*pause_authority_)) {
        send_error(c, "PAUSE_AUTHORITY_HELD", "another tutor holds pause authority");
        return;
      }
      pause_authority_ = c.state.id;
    }

    if (receipt > session_->wall_ms()) feed(Tick{receipt - session_->wall_ms()});
    const TimeMs stamp = std::max(receipt, session_->wall_ms());
    if (auto rejected = feed(action_event(msg, stamp))) send_error(c, rejected->code(), rejected->what());
  }

  void on_disconnect(std::uint64_t id) {
    connections_.erase(id);
    if (pause_authority_ == id) pause_authority_.reset();
  }

  ServiceOptions options_;
  asio::io_context io_;
  tcp::acceptor acceptor_;
  asio::steady_timer ticker_;
  asio::steady_timer heartbeat_;
  std::thread thread_;
  unsigned short port_ = 0;
  std::chrono::steady_clock::time_point started_at_;

  std::optional<Session> session_;
  std::map<std::uint64_t, std::shared_ptr<detail::Connection>> connections_;
  std::optional<std::uint64_t> pause_authority_;
  std::uint64_t next_id_ = 0;
  std::size_t frames_handled_ = 0;
  std::vector<Json> history_;
  std::string last_view_;
};

namespace detail {

inline void Connection::close() {
  if (closed_) return;
  closed_ = true;
  beast::error_code ignored;
  ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
  ws_.next_layer().socket().close(ignored);
  service_.on_disconnect(state.id);
}

inline std::optional<Role> query_role(std::string_view target) {
  auto q = target.find('?');
  if (q == std::string_view::npos) return std::nullopt;
  std::string_view query = target.substr(q + 1);
  while (!query.empty()) {
    auto amp = query.find('&');
    std::string_view pair = query.substr(0, amp);
    if (pair.substr(0, 5) == "role=") return role_from_string(pair.substr(5));
    if (amp == std::string_view::npos) break;
    query.remove_prefix(amp + 1);
  }
  return std::nullopt;
}

inline void Connection::on_request(beast::error_code ec) {
  if (ec) {
    close();
    return;
  }
  const std::string_view target(request_.target().data(), request_.target().size());
  const std::string_view path = target.substr(0, target.find('?'));
  if (!websocket::is_upgrade(request_) || path != "/ws") {
    closed_ = true;
    service_.on_disconnect(state.id);
    reject(path == "/ws" ? http::status::bad_request : http::status::not_found);
    return;
  }
  role_hint_ = query_role(target);
  ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
  auto self = shared_from_this();
  ws_.async_accept(request_, [self](beast::error_code ec2) {
    if (ec2) {
      self->close();
      return;
    }
    self->accepted_ = true;
    if (!self->queue_.empty()) self->write_next();
    self->read_frame();
  });
}

inline void Connection::on_frame(beast::error_code ec) {
  if (ec) {
    close();
    return;
  }
  if (!ws_.got_text()) {
    buffer_.consume(buffer_.size());
    ++service_.frames_handled_;
    service_.send_error(*this, "MALFORMED", "text frames only");
    read_frame();
    return;
  }
  const std::string frame = beast::buffers_to_string(buffer_.data());
  buffer_.consume(buffer_.size());
  service_.on_frame(*this, frame, role_hint_);
  if (!closed_) read_frame();
}

}  // namespace detail

// Starts a service for the session produced by `factory`.
inline std::unique_ptr<Service> serve(SessionFactory factory, unsigned short port,
                                      ServiceOptions options = {}) {
  options.port = port;
  auto service = std::make_unique<Service>(std::move(factory), std::move(options));
  service->start();
  return service;
}

}  // namespace maple::bridge
