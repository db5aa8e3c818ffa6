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

#pragma once

#include <memory>
#include <string>

#include "rigforge/service/session.h"

namespace rigforge::service {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  unsigned short port = 7474;
  /// I/O threads; 0 means max(2, hardware threads).
  int threads = 0;
  ServiceLimits limits;
};

/// HTTP and WebSocket front end over a SessionManager, all on one port.
///
///   POST   /sessions                 OBJ body -> session summary
///   GET    /sessions/{id}            session summary
///   DELETE /sessions/{id}            close
///   POST   /sessions/{id}/handles    handles message -> frame message
///   GET    /sessions/{id}/stream     WebSocket upgrade
///   GET    /health
class Server {
 public:
  explicit Server(ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds, listens and starts the I/O threads. Throws IoError when the
  /// address cannot be bound.
  void start();
  /// Port actually bound (useful with port 0).
  unsigned short port() const;
  void stop();
  /// Blocks until stop() is called from another thread or a signal handler
  /// installed by the caller.
  void wait();

  SessionManager& sessions();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rigforge::service
