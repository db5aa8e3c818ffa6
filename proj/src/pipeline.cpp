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

#include "rigforge/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>

#include "rigforge/errors.h"

namespace rigforge {

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const OpenMeshError*>(&error)) return kExitOpenMesh;
  if (dynamic_cast<const DegenerateFrameError*>(&error)) return kExitDegenerateFrame;
  if (dynamic_cast<const ChecksumMismatchError*>(&error)) return kExitChecksum;
  if (dynamic_cast<const InvalidPoseError*>(&error)) return kExitInvalidPose;
  if (dynamic_cast<const SkeletonError*>(&error) ||
      dynamic_cast<const NoInteriorFoundError*>(&error)) {
    return kExitSkeleton;
  }
  if (dynamic_cast<const InvalidArgumentError*>(&error)) return kExitUsage;
  return kExitParse;
}

namespace {

std::string one_line(std::string text) {
  std::replace(text.begin(), text.end(), '\n', ' ');
  std::replace(text.begin(), text.end(), '\r', ' ');
  return text;
}

int fail(std::ostream& err, int code, const std::string& message) {
  err << code << ": " << one_line(message) << "\n";
  return code;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return fail(err, exit_code_for(e), e.what());
  }
}

int write_or_fail(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
  } catch (const IoError& e) {
    return fail(err, kExitWrite, e.what());
  }
  return kExitOk;
}

std::string fixed(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

int run_rig(const RigCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<std::string> warnings;
    const Mesh mesh = load_mesh(cmd.mesh, &warnings);
    for (const auto& w : warnings) out << "warning: " << w << "\n";
    const Rig rig = build_rig(mesh, cmd.options);
    if (int code = write_or_fail(err, [&] { save_rig(rig, cmd.out); })) {
      return code;
    }
    out << "joints " << rig.skeleton.num_joints() << "\n"
        << "bones " << rig.skeleton.num_bones() << "\n"
        << "chains " << rig.chain_count << "\n"
        << "slice centers " << rig.raw_center_count << "\n";
    return int(kExitOk);
  });
}

int run_deform(const DeformCommand& cmd, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Mesh mesh = load_mesh(cmd.mesh);
    const Rig rig = load_rig(cmd.rig);
    check_rig_matches(rig, mesh);
    const ControlHandles handles = load_pose(cmd.pose);
    check_handles(handles, rig.skeleton.num_joints());

    DeformOptions options;
    options.alpha = rig.options.alpha;
    options.decompose = cmd.decompose;
    if (cmd.threshold_deg) options.detector.angle_threshold = *cmd.threshold_deg * M_PI / 180.0;
    if (cmd.step_deg) options.detector.max_step_angle = *cmd.step_deg * M_PI / 180.0;
    options.detector.validate();

    const DeformResult result =
        deform(mesh, rig.skeleton, rig.binding, handles, options);
    const auto report_path = report_path_for(cmd.out);
    if (int code = write_or_fail(err, [&] {
          save_mesh(result.mesh, cmd.out);
          save_report(result.report, options.detector, report_path);
        })) {
      return code;
    }
    out << "steps " << result.report.steps_used << "\n"
        << "global distortion " << fixed(result.report.global_distortion, 9)
        << "\n"
        << "flagged joints";
    for (auto j : result.report.flagged_joints) {
      out << " " << j << " (" << fixed(result.report.per_joint_angle[j] * 180.0 / M_PI, 2)
          << " deg)";
    }
    if (result.report.flagged_joints.empty()) out << " none";
    out << "\n"
        << "report " << report_path.string() << "\n";
    return int(kExitOk);
  });
}

int run_inspect(const std::filesystem::path& path, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const Rig rig = load_rig(path);
    out << "format_version " << rig.format_version << "\n"
        << "checksum " << checksum_hex(rig.checksum) << "\n"
        << "vertices " << rig.vertex_count << "\n"
        << "faces " << rig.face_count << "\n"
        << "joints " << rig.skeleton.num_joints() << "\n"
        << "bones " << rig.skeleton.num_bones() << "\n"
        << "root " << rig.skeleton.root << "\n"
        << "chains " << rig.chain_count << "\n";
    for (std::size_t b = 0; b < rig.skeleton.bones.size(); ++b) {
      out << "bone " << b << " " << rig.skeleton.bones[b][0] << "-"
          << rig.skeleton.bones[b][1] << " length "
          << fixed(rig.skeleton.bone_lengths[b]) << "\n";
    }
    std::size_t lo = SIZE_MAX, hi = 0, total = 0;
    double sum_lo = 1e300, sum_hi = -1e300;
    for (const auto& list : rig.binding.weights) {
      lo = std::min(lo, list.size());
      hi = std::max(hi, list.size());
      total += list.size();
      double s = 0.0;
      for (const JointWeight& w : list) s += w.weight;
      sum_lo = std::min(sum_lo, s);
      sum_hi = std::max(sum_hi, s);
    }
    const std::size_t n = rig.binding.weights.size();
    if (n == 0) lo = 0, sum_lo = sum_hi = 0.0;
    out << "influences min " << lo << " max " << hi << " mean "
        << fixed(n ? double(total) / double(n) : 0.0, 4) << "\n"
        << "weight sum min " << fixed(sum_lo, 12) << " max "
        << fixed(sum_hi, 12) << "\n";
    return int(kExitOk);
  });
}

}  // namespace rigforge
