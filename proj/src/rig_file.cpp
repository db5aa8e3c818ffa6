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

#include "rigforge/rig_file.h"

#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rigforge/errors.h"

namespace rigforge {

using nlohmann::json;

Rig build_rig(const Mesh& mesh, const RigOptions& options) {
  if (mesh.vertices.empty() || mesh.faces.empty()) {
    throw EmptyMeshError("mesh has no faces");
  }
  check_mesh(mesh);
  options.slicing.validate();
  const TopologyReport topo = validate_topology(mesh);
  if (!topo.is_closed) {
    throw OpenMeshError("mesh is not closed: " +
                        std::to_string(topo.boundary_edge_count) +
                        " boundary edges, " +
                        std::to_string(topo.non_manifold_edge_count) +
                        " non-manifold edges");
  }

  Rig rig;
  rig.options = options;
  rig.frame = compute_frame(mesh);
  const Mesh aligned = to_frame(mesh, rig.frame);
  const RayCaster caster(aligned);
  const auto slices = slice_mesh(aligned, caster, options.slicing);
  const PartChains chains = classify_parts(slices);
  rig.chain_count = chains.chains.size();
  rig.raw_center_count = chains.center_count();
  const Skeleton local =
      build_skeleton(chains, aligned, caster, options.skeleton);
  rig.skeleton = skeleton_to_world(local, rig.frame);
  rig.binding = compute_weights(mesh, rig.skeleton,
                                bind_vertices(mesh, rig.skeleton),
                                options.alpha);
  rig.checksum = mesh_checksum(mesh);
  rig.vertex_count = mesh.vertices.size();
  rig.face_count = mesh.faces.size();
  return rig;
}

namespace {

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ull;

  void bytes(std::uint64_t value, int count) {
    for (int i = 0; i < count; ++i) {
      state ^= (value >> (8 * i)) & 0xffu;
      state *= 0x100000001b3ull;
    }
  }
};

}  // namespace

std::uint64_t mesh_checksum(const Mesh& mesh) {
  Fnv1a h;
  h.bytes(mesh.vertices.size(), 8);
  h.bytes(mesh.faces.size(), 8);
  for (const Vec3& v : mesh.vertices) {
    for (int k = 0; k < 3; ++k) h.bytes(std::bit_cast<std::uint64_t>(v[k]), 8);
  }
  for (const Face& f : mesh.faces) {
    for (auto i : f) h.bytes(i, 4);
  }
  return h.state;
}

std::string checksum_hex(std::uint64_t checksum) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(checksum));
  return buf;
}

void check_rig_matches(const Rig& rig, const Mesh& mesh) {
  const std::uint64_t actual = mesh_checksum(mesh);
  if (actual != rig.checksum) {
    throw ChecksumMismatchError("mesh checksum " + checksum_hex(actual) +
                                " does not match rig checksum " +
                                checksum_hex(rig.checksum));
  }
}

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw ParseError("expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw ParseError("expected a number");
    v[k] = j[k].get<double>();
  }
  if (!v.allFinite()) throw ParseError("non-finite coordinate");
  return v;
}

const json& field(const json& obj, const char* key) {
  if (!obj.is_object()) throw ParseError(std::string("expected object holding ") + key);
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field ") + key);
  return *it;
}

template <typename T>
std::vector<T> list_of(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " is not an array");
  return j.get<std::vector<T>>();
}

}  // namespace

json rig_to_json(const Rig& rig) {
  json doc;
  doc["format_version"] = rig.format_version;
  doc["checksum"] = checksum_hex(rig.checksum);
  doc["vertex_count"] = rig.vertex_count;
  doc["face_count"] = rig.face_count;
  doc["config"] = {
      {"slices", rig.options.slicing.slice_count},
      {"rays", rig.options.slicing.ray_count},
      {"mode", to_string(rig.options.slicing.mode)},
      {"angle_tolerance_deg", rig.options.skeleton.angle_tolerance_deg},
      {"smooth", rig.options.skeleton.smooth},
      {"attach_multiplier", rig.options.skeleton.attach_multiplier},
      {"alpha", rig.options.alpha},
  };
  doc["frame"] = {
      {"center", vec_json(rig.frame.center)},
      {"axes", json::array({vec_json(rig.frame.axes.col(0)),
                            vec_json(rig.frame.axes.col(1)),
                            vec_json(rig.frame.axes.col(2))})},
      {"extents", vec_json(rig.frame.extents)},
      {"variances", vec_json(rig.frame.variances)},
  };
  json joints = json::array();
  for (const Vec3& j : rig.skeleton.joints) joints.push_back(vec_json(j));
  json bones = json::array();
  for (const Bone& b : rig.skeleton.bones) bones.push_back({b[0], b[1]});
  doc["skeleton"] = {
      {"root", rig.skeleton.root},
      {"joints", joints},
      {"bones", bones},
      {"bone_lengths", rig.skeleton.bone_lengths},
      {"joint_chain", rig.skeleton.joint_chain},
  };
  json weights = json::array();
  for (const auto& list : rig.binding.weights) {
    json row = json::array();
    for (const JointWeight& w : list) row.push_back({w.joint, w.weight});
    weights.push_back(std::move(row));
  }
  doc["binding"] = {
      {"influence_radius_joints", rig.binding.influence_radius_joints},
      {"bone_of_vertex", rig.binding.bone_of_vertex},
      {"bone_distance", rig.binding.bone_distance},
      {"bone_param", rig.binding.bone_param},
      {"weights", weights},
  };
  doc["stats"] = {{"chain_count", rig.chain_count},
                  {"raw_center_count", rig.raw_center_count}};
  return doc;
}

Rig rig_from_json(const json& doc) {
  try {
    Rig rig;
    rig.format_version = field(doc, "format_version").get<int>();
    if (rig.format_version != kRigFormatVersion) {
      throw ParseError("unsupported rig format_version " +
                       std::to_string(rig.format_version));
    }
    const std::string hex = field(doc, "checksum").get<std::string>();
    if (hex.size() != 16 ||
        hex.find_first_not_of("0123456789abcdef") != std::string::npos) {
      throw ParseError("checksum must be 16 lowercase hex digits");
    }
    rig.checksum = std::stoull(hex, nullptr, 16);
    rig.vertex_count = field(doc, "vertex_count").get<std::size_t>();
    rig.face_count = field(doc, "face_count").get<std::size_t>();

    const json& config = field(doc, "config");
    rig.options.slicing.slice_count = field(config, "slices").get<int>();
    rig.options.slicing.ray_count = field(config, "rays").get<int>();
    rig.options.slicing.mode =
        parse_slice_mode(field(config, "mode").get<std::string>());
    rig.options.skeleton.angle_tolerance_deg =
        field(config, "angle_tolerance_deg").get<double>();
    rig.options.skeleton.smooth = field(config, "smooth").get<bool>();
    rig.options.skeleton.attach_multiplier =
        field(config, "attach_multiplier").get<double>();
    rig.options.alpha = field(config, "alpha").get<double>();

    const json& frame = field(doc, "frame");
    rig.frame.center = vec_from(field(frame, "center"));
    const json& axes = field(frame, "axes");
    if (!axes.is_array() || axes.size() != 3) throw ParseError("frame axes");
    for (int k = 0; k < 3; ++k) rig.frame.axes.col(k) = vec_from(axes[k]);
    rig.frame.extents = vec_from(field(frame, "extents"));
    rig.frame.variances = vec_from(field(frame, "variances"));

    const json& skel = field(doc, "skeleton");
    rig.skeleton.root = field(skel, "root").get<std::uint32_t>();
    for (const json& j : list_of<json>(field(skel, "joints"), "joints")) {
      rig.skeleton.joints.push_back(vec_from(j));
    }
    for (const json& b : list_of<json>(field(skel, "bones"), "bones")) {
      if (!b.is_array() || b.size() != 2) throw ParseError("bone must be [a, b]");
      rig.skeleton.bones.push_back({b[0].get<std::uint32_t>(),
                                    b[1].get<std::uint32_t>()});
    }
    rig.skeleton.bone_lengths =
        list_of<double>(field(skel, "bone_lengths"), "bone_lengths");
    rig.skeleton.joint_chain =
        list_of<int>(field(skel, "joint_chain"), "joint_chain");
    check_skeleton(rig.skeleton);

    const json& bind = field(doc, "binding");
    rig.binding.influence_radius_joints =
        field(bind, "influence_radius_joints").get<int>();
    rig.binding.bone_of_vertex =
        list_of<std::uint32_t>(field(bind, "bone_of_vertex"), "bone_of_vertex");
    rig.binding.bone_distance =
        list_of<double>(field(bind, "bone_distance"), "bone_distance");
    rig.binding.bone_param =
        list_of<double>(field(bind, "bone_param"), "bone_param");
    for (const json& row : list_of<json>(field(bind, "weights"), "weights")) {
      std::vector<JointWeight> list;
      for (const json& w : list_of<json>(row, "weight row")) {
        if (!w.is_array() || w.size() != 2) {
          throw ParseError("weight must be [joint, weight]");
        }
        list.push_back({w[0].get<std::uint32_t>(), w[1].get<double>()});
      }
      rig.binding.weights.push_back(std::move(list));
    }
    const std::size_t n = rig.vertex_count;
    if (rig.binding.bone_of_vertex.size() != n ||
        rig.binding.bone_distance.size() != n ||
        rig.binding.bone_param.size() != n) {
      throw ParseError("binding does not cover every vertex");
    }
    for (auto b : rig.binding.bone_of_vertex) {
      if (b >= rig.skeleton.bones.size()) throw ParseError("bound bone out of range");
    }
    check_binding(rig.binding, n, rig.skeleton.joints.size());

    const json& stats = field(doc, "stats");
    rig.chain_count = field(stats, "chain_count").get<std::size_t>();
    rig.raw_center_count = field(stats, "raw_center_count").get<std::size_t>();
    return rig;
  } catch (const ParseError&) {
    throw;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed rig: ") + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string("inconsistent rig: ") + e.what());
  }
}

std::string format_rig(const Rig& rig) { return rig_to_json(rig).dump(1) + "\n"; }

namespace {

json parse_json_text(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

Rig parse_rig(const std::string& text) {
  return rig_from_json(parse_json_text(text, "rig"));
}

void save_rig(const Rig& rig, const std::filesystem::path& path) {
  write_file(path, format_rig(rig));
}

Rig load_rig(const std::filesystem::path& path) {
  return parse_rig(read_file(path));
}

ControlHandles parse_pose(const std::string& text) {
  const json doc = parse_json_text(text, "pose");
  try {
    const int version = field(doc, "format_version").get<int>();
    if (version != kRigFormatVersion) {
      throw ParseError("unsupported pose format_version " + std::to_string(version));
    }
    ControlHandles out;
    for (const json& h : list_of<json>(field(doc, "handles"), "handles")) {
      const json& joint = field(h, "joint");
      if (!joint.is_number_integer()) throw ParseError("joint must be an integer");
      const auto j = joint.get<std::int64_t>();
      if (j < 0 || j > std::int64_t(UINT32_MAX)) {
        throw InvalidPoseError("joint " + std::to_string(j) + " out of range");
      }
      out.handles.push_back({static_cast<std::uint32_t>(j),
                             vec_from(field(h, "target"))});
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed pose: ") + e.what());
  }
}

ControlHandles load_pose(const std::filesystem::path& path) {
  return parse_pose(read_file(path));
}

std::string format_pose(const ControlHandles& handles) {
  json list = json::array();
  for (const Handle& h : handles.handles) {
    list.push_back({{"joint", h.joint}, {"target", vec_json(h.target)}});
  }
  json doc = {{"format_version", kRigFormatVersion}, {"handles", list}};
  return doc.dump(1) + "\n";
}

json report_to_json(const DistortionReport& report,
                    const DetectorConfig& config) {
  constexpr double kDeg = 180.0 / M_PI;
  json angles = json::array();
  for (double a : report.per_joint_angle) angles.push_back(a * kDeg);
  json regions = json::object();
  for (const auto& [bone, value] : report.per_region_distortion) {
    regions[std::to_string(bone)] = value;
  }
  return {
      {"format_version", kRigFormatVersion},
      {"global_distortion", report.global_distortion},
      {"per_joint_angle_deg", angles},
      {"flagged_joints", report.flagged_joints},
      {"per_region_distortion", regions},
      {"steps_used", report.steps_used},
      {"distortion_tolerance", report.distortion_tolerance},
      {"within_tolerance", report.within_tolerance},
      {"angle_threshold_deg", config.angle_threshold * kDeg},
      {"max_step_angle_deg", config.max_step_angle * kDeg},
  };
}

void save_report(const DistortionReport& report, const DetectorConfig& config,
                 const std::filesystem::path& path) {
  write_file(path, report_to_json(report, config).dump(1) + "\n");
}

std::filesystem::path report_path_for(const std::filesystem::path& mesh_path) {
  std::filesystem::path p = mesh_path;
  p.replace_filename(mesh_path.stem().string() + ".report.json");
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed for " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace rigforge
