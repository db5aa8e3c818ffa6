// Copyright 2026 The Rigforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rigforge/service/server.h"

#include <algorithm>
#include <deque>
#include <thread>
#include <vector>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include "rigforge/errors.h"

namespace rigforge::service {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

namespace {

constexpr std::size_t kBodyLimit = 512u * 1024u * 1024u;

// Splits "/a/b/c" into {"a", "b", "c"}, ignoring a query string.
std::vector<std::string> path_parts(beast::string_view target) {
  std::string path(target.substr(0, target.find('?')));
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    const std::size_t end = path.find('/', start);
    const std::size_t stop = end == std::string::npos ? path.size() : end;
    if (stop > start) parts.push_back(path.substr(start, stop - start));
    start = stop + 1;
  }
  return parts;
}

http::response<http::string_body> json_response(
    const http::request<http::string_body>& req, http::status status,
    const json& body) {
  http::response<http::string_body> res{status, req.version()};
  res.set(http::field::content_type, "application/json");
  res.set(http::field::access_control_allow_origin, "*");
  res.keep_alive(req.keep_alive());
  res.body() = body.dump();
  res.prepare_payload();
  return res;
}

http::response<http::string_body> error_response(
    const http::request<http::string_body>& req, int status,
    const std::string& message) {
  return json_response(req, static_cast<http::status>(status),
                       {{"code", status}, {"error", message}});
}

class WsConnection : public std::enable_shared_from_this<WsConnection> {
 public:
  WsConnection(tcp::socket socket, std::shared_ptr<Session> session)
      : ws_(std::move(socket)), session_(std::move(session)) {}

  ~WsConnection() {
    if (token_ >= 0) session_->unsubscribe(token_);
  }

  void run(http::request<http::string_body> req) {
    ws_.set_option(
        websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.read_message_max(64u * 1024u * 1024u);
    ws_.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept,
                                                    shared_from_this()));
  }

 private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    std::weak_ptr<WsConnection> weak = shared_from_this();
    auto executor = ws_.get_executor();
    token_ = session_->subscribe([weak, executor](const std::string& message) {
      if (auto self = weak.lock()) {
        net::post(executor, [self, message] { self->send(message); });
      }
    });
    send(session_->topology_message().dump());
    if (session_->closed()) {
      send(json{{"type", "closed"}, {"session", session_->id()}}.dump());
    }
    read();
  }

  void read() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsConnection::on_read,
                                                      shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    try {
      auto [handles, revision] = parse_handles_message(text);
      session_->submit(std::move(handles), revision);
    } catch (const ServiceError& e) {
      send(error_message(e.status(), e.what()).dump());
    }
    read();
  }

  void send(std::string message) {
    if (closing_) return;
    const bool last = message.find("\"type\":\"closed\"") != std::string::npos;
    outbox_.push_back(std::move(message));
    if (last) closing_ = true;
    if (outbox_.size() == 1) write_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(outbox_.front()),
                    beast::bind_front_handler(&WsConnection::on_write,
                                              shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    outbox_.pop_front();
    if (!outbox_.empty()) {
      write_next();
    } else if (closing_) {
      ws_.async_close(websocket::close_code::normal,
                      [self = shared_from_this()](beast::error_code) {});
    }
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::shared_ptr<Session> session_;
  beast::flat_buffer buffer_;
  std::deque<std::string> outbox_;
  bool closing_ = false;
  int token_ = -1;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection> {
 public:
  HttpConnection(tcp::socket socket, SessionManager& sessions)
      : stream_(std::move(socket)), sessions_(sessions) {}

  void run() {
    net::dispatch(stream_.get_executor(),
                  beast::bind_front_handler(&HttpConnection::read,
                                            shared_from_this()));
  }

 private:
  void read() {
    parser_.emplace();
    parser_->body_limit(kBodyLimit);
    stream_.expires_after(std::chrono::seconds(60));
    http::async_read(stream_, buffer_, *parser_,
                     beast::bind_front_handler(&HttpConnection::on_read,
                                               shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec == http::error::end_of_stream) {
      beast::error_code ignored;
      stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
      return;
    }
    if (ec == http::error::body_limit) {
      http::request<http::string_body> req;
      reply(error_response(req, 413, "request body too large"));
      return;
    }
    if (ec) return;
    http::request<http::string_body> req = parser_->release();

    if (websocket::is_upgrade(req)) {
      const auto parts = path_parts(req.target());
      if (parts.size() == 3 && parts[0] == "sessions" && parts[2] == "stream") {
        if (auto session = sessions_.find(parts[1])) {
          stream_.expires_never();
          std::make_shared<WsConnection>(stream_.release_socket(), session)
              ->run(std::move(req));
          return;
        }
        reply(error_response(req, 404, "unknown session " + parts[1]));
        return;
      }
      reply(error_response(req, 404, "no WebSocket endpoint here"));
      return;
    }
    reply(handle(req));
  }

  http::response<http::string_body> handle(
      const http::request<http::string_body>& req) {
    const auto parts = path_parts(req.target());
    const auto method = req.method();
    try {
      if (method == http::verb::options) {
        http::response<http::string_body> res{http::status::no_content,
                                              req.version()};
        res.set(http::field::access_control_allow_origin, "*");
        res.set(http::field::access_control_allow_methods,
                "GET, POST, DELETE, OPTIONS");
        res.set(http::field::access_control_allow_headers, "Content-Type");
        res.keep_alive(req.keep_alive());
        res.prepare_payload();
        return res;
      }
      if (parts.size() == 1 && parts[0] == "health") {
        return json_response(req, http::status::ok, {{"status", "ok"}});
      }
      if (parts.empty() || parts[0] != "sessions" || parts.size() > 3) {
        return error_response(req, 404, "not found");
      }
      if (parts.size() == 1) {
        if (method != http::verb::post) {
          return error_response(req, 405, "use POST to create a session");
        }
        auto session = sessions_.create(req.body());
        return json_response(req, http::status::ok, session->summary());
      }
      const std::string& id = parts[1];
      if (parts.size() == 2) {
        if (method == http::verb::delete_) {
          if (!sessions_.close(id)) {
            return error_response(req, 404, "unknown session " + id);
          }
          return json_response(req, http::status::ok, {{"closed", id}});
        }
        if (method == http::verb::get) {
          auto session = sessions_.find(id);
          if (!session) return error_response(req, 404, "unknown session " + id);
          return json_response(req, http::status::ok, session->summary());
        }
        return error_response(req, 405, "method not allowed");
      }
      if (parts[2] == "handles") {
        if (method != http::verb::post) {
          return error_response(req, 405, "use POST to send handles");
        }
        auto session = sessions_.find(id);
        if (!session) return error_response(req, 404, "unknown session " + id);
        auto [handles, revision] = parse_handles_message(req.body());
        const FrameMessage frame = session->compute(handles, revision);
        return json_response(req, http::status::ok,
                             frame_to_json(frame, session->options().detector));
      }
      return error_response(req, 404, "not found");
    } catch (const ServiceError& e) {
      return error_response(req, e.status(), e.what());
    } catch (const std::exception& e) {
      return error_response(req, 500, e.what());
    }
  }

  void reply(http::response<http::string_body> res) {
    auto owned = std::make_shared<http::response<http::string_body>>(std::move(res));
    http::async_write(stream_, *owned,
                      [self = shared_from_this(), owned](beast::error_code ec,
                                                         std::size_t) {
                        if (ec) return;
                        if (owned->need_eof()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(
                              tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->read();
                      });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  std::optional<http::request_parser<http::string_body>> parser_;
  SessionManager& sessions_;
};

}  // namespace

struct Server::Impl {
  explicit Impl(ServerOptions o) : options(std::move(o)), sessions(options.limits) {}

  void accept() {
    acceptor->async_accept(
        net::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
          if (ec) {
            if (ec == net::error::operation_aborted) return;
          } else {
            std::make_shared<HttpConnection>(std::move(socket), sessions)->run();
          }
          accept();
        });
  }

  ServerOptions options;
  SessionManager sessions;
  net::io_context io;
  std::optional<tcp::acceptor> acceptor;
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work;
  std::vector<std::thread> threads;
  unsigned short bound_port = 0;
  std::mutex mutex;
  std::condition_variable stopped_cv;
  bool stopped = false;
};

Server::Server(ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

Server::~Server() { stop(); }

void Server::start() {
  Impl& s = *impl_;
  beast::error_code ec;
  const auto address = net::ip::make_address(s.options.host, ec);
  if (ec) throw IoError("bad host address " + s.options.host + ": " + ec.message());
  const tcp::endpoint endpoint(address, s.options.port);
  s.acceptor.emplace(s.io);
  s.acceptor->open(endpoint.protocol(), ec);
  if (!ec) s.acceptor->set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) s.acceptor->bind(endpoint, ec);
  if (!ec) s.acceptor->listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw IoError("cannot listen on " + s.options.host + ":" +
                  std::to_string(s.options.port) + ": " + ec.message());
  }
  s.bound_port = s.acceptor->local_endpoint().port();
  s.work.emplace(s.io.get_executor());
  s.accept();
  int n = s.options.threads;
  if (n <= 0) n = std::max(2, int(std::thread::hardware_concurrency()));
  for (int i = 0; i < n; ++i) s.threads.emplace_back([&s] { s.io.run(); });
}

unsigned short Server::port() const { return impl_->bound_port; }

void Server::stop() {
  Impl& s = *impl_;
  {
    std::lock_guard<std::mutex> lock(s.mutex);
    if (s.stopped) return;
    s.stopped = true;
  }
  if (s.acceptor) {
    net::post(s.io, [&s] {
      beast::error_code ignored;
      s.acceptor->close(ignored);
    });
  }
  s.work.reset();
  s.io.stop();
  for (auto& t : s.threads) {
    if (t.joinable()) t.join();
  }
  s.threads.clear();
  s.stopped_cv.notify_all();
}

void Server::wait() {
  Impl& s = *impl_;
  std::unique_lock<std::mutex> lock(s.mutex);
  s.stopped_cv.wait(lock, [&] { return s.stopped; });
}

SessionManager& Server::sessions() { return impl_->sessions; }

}  // namespace rigforge::service
