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

#include "rigforge/service/session.h"

#include <cstdio>
#include <random>

#include "rigforge/errors.h"

namespace rigforge::service {

using nlohmann::json;

namespace {

json joints_json(const std::vector<Vec3>& joints) {
  json out = json::array();
  for (const Vec3& j : joints) out.push_back({j.x(), j.y(), j.z()});
  return out;
}

json bones_json(const Skeleton& skeleton) {
  json out = json::array();
  for (const Bone& b : skeleton.bones) out.push_back({b[0], b[1]});
  return out;
}

}  // namespace

Session::Session(std::string id, Mesh mesh, Rig rig, DeformOptions options)
    : id_(std::move(id)),
      mesh_(std::move(mesh)),
      rig_(std::move(rig)),
      options_(options),
      worker_([this] { run(); }) {}

Session::~Session() {
  close();
  if (worker_.joinable()) {
    if (worker_.get_id() == std::this_thread::get_id()) {
      worker_.detach();
    } else {
      worker_.join();
    }
  }
}

json Session::summary() const {
  json candidates = json::array();
  for (std::size_t j = 0; j < rig_.skeleton.joints.size(); ++j) candidates.push_back(j);
  return {
      {"session", id_},
      {"vertex_count", mesh_.vertices.size()},
      {"face_count", mesh_.faces.size()},
      {"joints", joints_json(rig_.skeleton.joints)},
      {"bones", bones_json(rig_.skeleton)},
      {"root", rig_.skeleton.root},
      {"handle_candidates", candidates},
  };
}

json Session::topology_message() const {
  std::vector<std::uint32_t> faces;
  faces.reserve(mesh_.faces.size() * 3);
  for (const Face& f : mesh_.faces) faces.insert(faces.end(), f.begin(), f.end());
  return {
      {"type", "topology"},
      {"session", id_},
      {"faces", faces},
      {"joints", joints_json(rig_.skeleton.joints)},
      {"bones", bones_json(rig_.skeleton)},
  };
}

void Session::submit(ControlHandles handles, std::uint64_t client_revision) {
  try {
    check_handles(handles, rig_.skeleton.joints.size());
  } catch (const InvalidPoseError& e) {
    throw ServiceError(422, e.what());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  if (closing_) throw ServiceError(404, "session " + id_ + " is closed");
  pending_ = Job{std::move(handles), client_revision};
  wake_.notify_one();
}

FrameMessage Session::compute(const ControlHandles& handles,
                              std::uint64_t client_revision) {
  try {
    check_handles(handles, rig_.skeleton.joints.size());
  } catch (const InvalidPoseError& e) {
    throw ServiceError(422, e.what());
  }
  std::lock_guard<std::mutex> serial(compute_mutex_);
  DeformResult result =
      deform(mesh_, rig_.skeleton, rig_.binding, handles, options_);
  FrameMessage frame;
  frame.client_revision = client_revision;
  frame.mesh = std::move(result.mesh);
  frame.joints = std::move(result.joints);
  frame.report = std::move(result.report);
  std::lock_guard<std::mutex> lock(mutex_);
  frame.revision = ++revision_;
  latest_ = frame;
  return frame;
}

std::uint64_t Session::revision() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return revision_;
}

std::optional<FrameMessage> Session::latest_frame() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return latest_;
}

void Session::wait_idle() const {
  std::unique_lock<std::mutex> lock(mutex_);
  idle_.wait(lock, [&] { return !pending_ && !busy_; });
}

int Session::subscribe(Listener listener) {
  std::lock_guard<std::mutex> lock(mutex_);
  const int token = next_token_++;
  listeners_.emplace(token, std::move(listener));
  return token;
}

void Session::unsubscribe(int token) {
  std::lock_guard<std::mutex> lock(mutex_);
  listeners_.erase(token);
}

void Session::close() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (closing_) return;
    closing_ = true;
    pending_.reset();
    wake_.notify_all();
    idle_.notify_all();
  }
}

bool Session::closed() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return closing_;
}

void Session::broadcast(const std::string& message) {
  std::vector<Listener> targets;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [token, l] : listeners_) targets.push_back(l);
  }
  for (const Listener& l : targets) l(message);
}

void Session::run() {
  std::unique_lock<std::mutex> lock(mutex_);
  while (true) {
    wake_.wait(lock, [&] { return closing_ || pending_.has_value(); });
    if (closing_) break;
    Job job = std::move(*pending_);
    pending_.reset();
    busy_ = true;
    lock.unlock();
    std::string message;
    try {
      const FrameMessage frame = compute(job.handles, job.client_revision);
      message = frame_to_json(frame, options_.detector).dump();
    } catch (const ServiceError& e) {
      message = error_message(e.status(), e.what()).dump();
    } catch (const std::exception& e) {
      message = error_message(422, e.what()).dump();
    }
    broadcast(message);
    lock.lock();
    busy_ = false;
    if (!pending_) idle_.notify_all();
  }
  busy_ = false;
  lock.unlock();
  idle_.notify_all();
  broadcast(json{{"type", "closed"}, {"session", id_}}.dump());
}

json frame_to_json(const FrameMessage& frame, const DetectorConfig& config) {
  std::vector<double> flat;
  flat.reserve(frame.mesh.vertices.size() * 3);
  for (const Vec3& v : frame.mesh.vertices) {
    flat.insert(flat.end(), {v.x(), v.y(), v.z()});
  }
  return {
      {"type", "frame"},
      {"revision", frame.revision},
      {"client_revision", frame.client_revision},
      {"vertices", flat},
      {"joints", joints_json(frame.joints)},
      {"report", report_to_json(frame.report, config)},
  };
}

json error_message(int code, const std::string& message) {
  return {{"type", "error"}, {"code", code}, {"message", message}};
}

std::pair<ControlHandles, std::uint64_t> parse_handles_message(
    const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ServiceError(400, std::string("message is not JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("type", "") != "handles") {
      throw ServiceError(400, "expected a message of type \"handles\"");
    }
    const json& rev = doc.at("revision");
    if (!rev.is_number_unsigned() && !(rev.is_number_integer() && rev.get<std::int64_t>() >= 0)) {
      throw ServiceError(400, "revision must be a nonnegative integer");
    }
    const json& list = doc.at("handles");
    if (!list.is_array()) throw ServiceError(400, "handles must be an array");
    ControlHandles handles;
    for (const json& h : list) {
      const json& joint = h.at("joint");
      if (!joint.is_number_integer()) throw ServiceError(400, "joint must be an integer");
      const auto j = joint.get<std::int64_t>();
      if (j < 0 || j > std::int64_t(UINT32_MAX)) {
        throw ServiceError(422, "joint " + std::to_string(j) + " does not exist");
      }
      const Vec3 target(h.at("x").get<double>(), h.at("y").get<double>(),
                        h.at("z").get<double>());
      if (!target.allFinite()) throw ServiceError(400, "non-finite handle target");
      handles.handles.push_back({static_cast<std::uint32_t>(j), target});
    }
    return {std::move(handles), rev.get<std::uint64_t>()};
  } catch (const json::exception& e) {
    throw ServiceError(400, std::string("malformed handles message: ") + e.what());
  }
}

std::string SessionManager::next_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx%08llx",
                static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(++counter_ & 0xffffffffu));
  return buf;
}

std::shared_ptr<Session> SessionManager::create(const std::string& obj_text) {
  Mesh mesh;
  try {
    mesh = parse_obj(obj_text);
  } catch (const Error& e) {
    throw ServiceError(400, e.what());
  }
  if (mesh.vertices.size() > limits_.max_vertices) {
    throw ServiceError(413, "mesh has " + std::to_string(mesh.vertices.size()) +
                                " vertices, limit is " +
                                std::to_string(limits_.max_vertices));
  }
  Rig rig;
  try {
    rig = build_rig(mesh);
  } catch (const Error& e) {
    throw ServiceError(422, e.what());
  }
  std::lock_guard<std::mutex> lock(mutex_);
  const std::string id = next_id();
  auto session = std::make_shared<Session>(id, std::move(mesh), std::move(rig));
  sessions_.emplace(id, session);
  return session;
}

std::shared_ptr<Session> SessionManager::find(const std::string& id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

bool SessionManager::close(const std::string& id) {
  std::shared_ptr<Session> session;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return false;
    session = std::move(it->second);
    sessions_.erase(it);
  }
  session->close();
  return true;
}

std::size_t SessionManager::size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return sessions_.size();
}

}  // namespace rigforge::service
