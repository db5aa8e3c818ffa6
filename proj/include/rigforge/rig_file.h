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

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "rigforge/deform.h"
#include "rigforge/mesh.h"
#include "rigforge/principal_frame.h"
#include "rigforge/skeleton.h"
#include "rigforge/skin_binding.h"
#include "rigforge/slicer.h"

namespace rigforge {

inline constexpr int kRigFormatVersion = 1;

struct RigOptions {
  SliceConfig slicing;
  SkeletonOptions skeleton;
  /// Inverse-distance exponent for skin weights and the MLS solve.
  double alpha = 2.0;
};

struct Rig {
  int format_version = kRigFormatVersion;
  PrincipalFrame frame;
  /// World coordinates.
  Skeleton skeleton;
  SkinBinding binding;
  std::uint64_t checksum = 0;
  std::size_t vertex_count = 0;
  std::size_t face_count = 0;
  RigOptions options;
  std::size_t chain_count = 0;
  /// Slice centers before decimation.
  std::size_t raw_center_count = 0;
};

/// Validate, frame, slice, build the skeleton, bind and weight. Throws
/// OpenMeshError, DegenerateFrameError, NoInteriorFoundError or
/// SkeletonError.
Rig build_rig(const Mesh& mesh, const RigOptions& options = {});

/// FNV-1a 64 over: vertex count and face count as little-endian u64, every
/// coordinate as a little-endian IEEE double, every face index as a
/// little-endian u32.
std::uint64_t mesh_checksum(const Mesh& mesh);
std::string checksum_hex(std::uint64_t checksum);

/// Throws ChecksumMismatchError when the mesh is not the one rigged.
void check_rig_matches(const Rig& rig, const Mesh& mesh);

nlohmann::json rig_to_json(const Rig& rig);
/// Throws ParseError for anything malformed or inconsistent.
Rig rig_from_json(const nlohmann::json& doc);
std::string format_rig(const Rig& rig);
Rig parse_rig(const std::string& text);
void save_rig(const Rig& rig, const std::filesystem::path& path);
Rig load_rig(const std::filesystem::path& path);

/// `{"format_version": 1, "handles": [{"joint": j, "target": [x, y, z]}]}`.
/// Joint indices are not range-checked here.
ControlHandles parse_pose(const std::string& text);
ControlHandles load_pose(const std::filesystem::path& path);
std::string format_pose(const ControlHandles& handles);

/// Angles are written in degrees.
nlohmann::json report_to_json(const DistortionReport& report,
                              const DetectorConfig& config);
void save_report(const DistortionReport& report, const DetectorConfig& config,
                 const std::filesystem::path& path);

/// `<dir>/<stem>.report.json` next to a deformed mesh path.
std::filesystem::path report_path_for(const std::filesystem::path& mesh_path);

/// Whole text of a file; IoError when it cannot be read.
std::string read_file(const std::filesystem::path& path);
/// IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rigforge
