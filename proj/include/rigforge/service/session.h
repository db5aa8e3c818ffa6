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

#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "rigforge/deform.h"
#include "rigforge/errors.h"
#include "rigforge/rig_file.h"

namespace rigforge::service {

/// Failure with the HTTP status it maps to (400, 404, 413, 422).
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& message)
      : Error(message), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct ServiceLimits {
  std::size_t max_vertices = 200000;
};

struct FrameMessage {
  /// Server revision: 1 for the first computed handle set, +1 per set.
  std::uint64_t revision = 0;
  /// Revision the client attached to the handle set this frame answers.
  std::uint64_t client_revision = 0;
  Mesh mesh;
  std::vector<Vec3> joints;
  DistortionReport report;
};

/// One uploaded mesh with its rig. Handle updates go into a single pending
/// slot that a private worker drains; a newer update replaces one that has
/// not started yet.
class Session {
 public:
  using Listener = std::function<void(const std::string& message)>;

  Session(std::string id, Mesh mesh, Rig rig, DeformOptions options = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  const Mesh& mesh() const { return mesh_; }
  const Rig& rig() const { return rig_; }
  const DeformOptions& options() const { return options_; }

  nlohmann::json summary() const;
  nlohmann::json topology_message() const;

  /// Validates and queues a handle set. Throws ServiceError(422) for a bad
  /// joint reference or ServiceError(404) once closed.
  void submit(ControlHandles handles, std::uint64_t client_revision);

  /// Deforms immediately on the calling thread, bumping the revision.
  FrameMessage compute(const ControlHandles& handles,
                       std::uint64_t client_revision);

  std::uint64_t revision() const;
  std::optional<FrameMessage> latest_frame() const;
  /// Blocks until nothing is pending or in flight.
  void wait_idle() const;

  /// Listeners receive serialized frame, error and close messages on the
  /// worker thread.
  int subscribe(Listener listener);
  void unsubscribe(int token);

  /// Stops accepting work and tells listeners; the in-flight deformation,
  /// if any, finishes first.
  void close();
  bool closed() const;

 private:
  struct Job {
    ControlHandles handles;
    std::uint64_t client_revision = 0;
  };

  void run();
  void broadcast(const std::string& message);

  const std::string id_;
  const Mesh mesh_;
  const Rig rig_;
  const DeformOptions options_;

  mutable std::mutex mutex_;
  mutable std::condition_variable wake_;
  mutable std::condition_variable idle_;
  std::optional<Job> pending_;
  bool busy_ = false;
  bool closing_ = false;
  std::uint64_t revision_ = 0;
  std::optional<FrameMessage> latest_;
  std::map<int, Listener> listeners_;
  int next_token_ = 0;
  std::mutex compute_mutex_;
  std::thread worker_;
};

nlohmann::json frame_to_json(const FrameMessage& frame,
                             const DetectorConfig& config);
nlohmann::json error_message(int code, const std::string& message);

/// Parses `{"type": "handles", "revision": r, "handles": [{"joint", "x",
/// "y", "z"}]}`. Throws ServiceError(400) when malformed.
std::pair<ControlHandles, std::uint64_t> parse_handles_message(
    const std::string& text);

class SessionManager {
 public:
  explicit SessionManager(ServiceLimits limits = {}) : limits_(limits) {}

  /// Parses and rigs an OBJ upload. Throws ServiceError with 400 (malformed
  /// mesh), 413 (too many vertices) or 422 (mesh cannot be rigged).
  std::shared_ptr<Session> create(const std::string& obj_text);
  std::shared_ptr<Session> find(const std::string& id) const;
  /// False when no such session exists.
  bool close(const std::string& id);
  std::size_t size() const;

 private:
  std::string next_id();

  ServiceLimits limits_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace rigforge::service
