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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "json.hpp"
#include "oracles.h"
#include "rigforge/errors.h"
#include "rigforge/pipeline.h"

namespace rigforge {
namespace {

namespace fs = std::filesystem;

class PipelineTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(oracles::temp_dir("pipeline"));
    save_mesh(fixtures::knee_fixture().mesh, *dir_ / "knee.obj");
    RigCommand cmd{*dir_ / "knee.obj", *dir_ / "knee.rig.json", {}};
    std::ostringstream out, err;
    ASSERT_EQ(run_rig(cmd, out, err), kExitOk) << err.str();
    save_mesh(fixtures::open_patch(3), *dir_ / "open.obj");
    save_mesh(fixtures::cube(), *dir_ / "cube.obj");
    Mesh moved = fixtures::knee_fixture().mesh;
    moved.vertices[5].x() += 0.01;
    save_mesh(moved, *dir_ / "moved.obj");
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  static fs::path path(const std::string& name) { return *dir_ / name; }

  static void write_pose(const std::string& name, const ControlHandles& h) {
    write_file(path(name), format_pose(h));
  }

  static const Rig& rig() {
    static const Rig r = load_rig(path("knee.rig.json"));
    return r;
  }

  int deform(const std::string& pose, const std::string& out_name,
             std::string* out = nullptr, std::string* err = nullptr,
             bool decompose = true) {
    DeformCommand cmd;
    cmd.mesh = path("knee.obj");
    cmd.rig = path("knee.rig.json");
    cmd.pose = path(pose);
    cmd.out = path(out_name);
    cmd.decompose = decompose;
    std::ostringstream o, e;
    const int code = run_deform(cmd, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
  }

  static fs::path* dir_;
};

fs::path* PipelineTest::dir_ = nullptr;

std::uint32_t nearest_joint(const Skeleton& s, const Vec3& p) {
  std::uint32_t best = 0;
  for (std::uint32_t j = 0; j < s.num_joints(); ++j) {
    if ((s.joints[j] - p).norm() < (s.joints[best] - p).norm()) best = j;
  }
  return best;
}

// Runs the CLI, returning its exit status and stderr.
int run_cli(const std::string& args, std::string* err = nullptr,
            std::string* out = nullptr) {
  const fs::path dir = fs::temp_directory_path();
  const fs::path err_file = dir / ("rigforge_cli_err_" + std::to_string(::getpid()));
  const fs::path out_file = dir / ("rigforge_cli_out_" + std::to_string(::getpid()));
  const std::string command = std::string("'") + RIGFORGE_CLI + "' " + args +
                              " >'" + out_file.string() + "' 2>'" +
                              err_file.string() + "'";
  const int status = std::system(command.c_str());
  if (err) *err = read_file(err_file);
  if (out) *out = read_file(out_file);
  fs::remove(err_file);
  fs::remove(out_file);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(ExitCodes, MapErrorTypes) {
  EXPECT_EQ(exit_code_for(ParseError("x")), kExitParse);
  EXPECT_EQ(exit_code_for(EmptyMeshError("x")), kExitParse);
  EXPECT_EQ(exit_code_for(IoError("x")), kExitParse);
  EXPECT_EQ(exit_code_for(OpenMeshError("x")), kExitOpenMesh);
  EXPECT_EQ(exit_code_for(DegenerateFrameError("x")), kExitDegenerateFrame);
  EXPECT_EQ(exit_code_for(ChecksumMismatchError("x")), kExitChecksum);
  EXPECT_EQ(exit_code_for(InvalidPoseError("x")), kExitInvalidPose);
  EXPECT_EQ(exit_code_for(SkeletonError("x")), kExitSkeleton);
  EXPECT_EQ(exit_code_for(NoInteriorFoundError("x")), kExitSkeleton);
  EXPECT_EQ(exit_code_for(InvalidArgumentError("x")), kExitUsage);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitParse);
  EXPECT_EQ(kExitWrite, 7);
  EXPECT_EQ(kExitUsage, 64);
}

TEST_F(PipelineTest, RigSummary) {
  std::ostringstream out, err;
  RigCommand cmd{path("knee.obj"), path("again.rig.json"), {}};
  ASSERT_EQ(run_rig(cmd, out, err), kExitOk);
  EXPECT_TRUE(err.str().empty());
  const std::string s = out.str();
  EXPECT_NE(s.find("joints " + std::to_string(rig().skeleton.num_joints()) + "\n"),
            std::string::npos);
  EXPECT_NE(s.find("bones " + std::to_string(rig().skeleton.num_bones()) + "\n"),
            std::string::npos);
  EXPECT_EQ(read_file(path("again.rig.json")), read_file(path("knee.rig.json")));
}

TEST_F(PipelineTest, RigErrors) {
  std::ostringstream out, err;
  EXPECT_EQ(run_rig({path("open.obj"), path("x.json"), {}}, out, err), kExitOpenMesh);
  EXPECT_EQ(run_rig({path("cube.obj"), path("x.json"), {}}, out, err),
            kExitDegenerateFrame);
  write_file(path("bad.obj"), "v 0 0 0\nf 1 2 3\n");
  EXPECT_EQ(run_rig({path("bad.obj"), path("x.json"), {}}, out, err), kExitParse);
  EXPECT_EQ(run_rig({path("nope.obj"), path("x.json"), {}}, out, err), kExitParse);
  EXPECT_EQ(run_rig({path("knee.obj"), path("none/x.json"), {}}, out, err),
            kExitWrite);
  RigOptions bad;
  bad.slicing.ray_count = 2;
  EXPECT_EQ(run_rig({path("knee.obj"), path("x.json"), bad}, out, err), kExitUsage);
  EXPECT_FALSE(fs::exists(path("x.json")));
}

TEST_F(PipelineTest, IdentityPoseReproducesMesh) {
  const Skeleton& s = rig().skeleton;
  write_pose("rest.json", rest_handles(s, {0, 3, std::uint32_t(s.num_joints() - 1)}));
  std::string out, err;
  ASSERT_EQ(deform("rest.json", "rest_out.obj", &out, &err), kExitOk) << err;
  const Mesh in = load_mesh(path("knee.obj"));
  const Mesh got = load_mesh(path("rest_out.obj"));
  ASSERT_EQ(got.faces, in.faces);
  for (std::size_t v = 0; v < in.vertices.size(); ++v) {
    EXPECT_LT((got.vertices[v] - in.vertices[v]).cwiseAbs().maxCoeff(), 1e-9);
  }
  EXPECT_NE(out.find("steps 1\n"), std::string::npos);
  EXPECT_NE(out.find("flagged joints none\n"), std::string::npos);
  const auto report = nlohmann::json::parse(read_file(path("rest_out.report.json")));
  EXPECT_LT(report["global_distortion"].get<double>(), 1e-12);
  EXPECT_EQ(report["steps_used"], 1);
}

TEST_F(PipelineTest, KneeBendFlagsAndDecomposes) {
  const Skeleton& s = rig().skeleton;
  const auto fx = fixtures::knee_fixture();
  const auto hip = nearest_joint(s, fx.hip);
  const auto knee = nearest_joint(s, fx.knee);
  const auto ankle = nearest_joint(s, fx.ankle);
  const Quat r(Eigen::AngleAxisd(M_PI * 2 / 3, Vec3::UnitZ()));
  const Vec3 pivot = s.joints[knee];
  write_pose("bend.json", {{{hip, s.joints[hip]},
                            {knee, pivot},
                            {ankle, r * (s.joints[ankle] - pivot) + pivot}}});
  std::string out, err;
  ASSERT_EQ(deform("bend.json", "bend.obj", &out, &err), kExitOk) << err;
  const auto multi = nlohmann::json::parse(read_file(path("bend.report.json")));
  ASSERT_EQ(deform("bend.json", "bend1.obj", nullptr, &err, false), kExitOk) << err;
  const auto single = nlohmann::json::parse(read_file(path("bend1.report.json")));
  EXPECT_GE(multi["steps_used"].get<int>(), 2);
  EXPECT_EQ(single["steps_used"].get<int>(), 1);
  const auto flagged = multi["flagged_joints"].get<std::vector<std::uint32_t>>();
  EXPECT_NE(std::find(flagged.begin(), flagged.end(), knee), flagged.end());
  EXPECT_LE(multi["global_distortion"].get<double>(),
            single["global_distortion"].get<double>());
  EXPECT_NE(out.find("(" ), std::string::npos);
  EXPECT_NE(out.find("report " + path("bend.report.json").string()), std::string::npos);
}

TEST_F(PipelineTest, DeformErrors) {
  std::string err;
  write_pose("oob.json", {{{999, Vec3::Zero()}}});
  EXPECT_EQ(deform("oob.json", "x.obj", nullptr, &err), kExitInvalidPose);
  EXPECT_EQ(err.rfind("5: ", 0), 0u) << err;
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
  write_file(path("neg.json"),
             R"({"format_version":1,"handles":[{"joint":-2,"target":[0,0,0]}]})");
  EXPECT_EQ(deform("neg.json", "x.obj"), kExitInvalidPose);
  write_file(path("garbage.json"), "{{");
  EXPECT_EQ(deform("garbage.json", "x.obj"), kExitParse);
  write_pose("rest.json", rest_handles(rig().skeleton, {0}));
  EXPECT_EQ(deform("rest.json", "missing_dir/x.obj", nullptr, &err), kExitWrite);
  EXPECT_EQ(err.rfind("7: ", 0), 0u) << err;

  DeformCommand cmd;
  cmd.mesh = path("moved.obj");
  cmd.rig = path("knee.rig.json");
  cmd.pose = path("rest.json");
  cmd.out = path("x.obj");
  std::ostringstream o, e;
  EXPECT_EQ(run_deform(cmd, o, e), kExitChecksum);
  EXPECT_EQ(e.str().rfind("4: ", 0), 0u);

  cmd.mesh = path("knee.obj");
  cmd.step_deg = 90.0;  // larger than the default threshold
  EXPECT_EQ(run_deform(cmd, o, e), kExitUsage);
  EXPECT_FALSE(fs::exists(path("x.obj")));
}

TEST_F(PipelineTest, Inspect) {
  std::ostringstream out, err;
  ASSERT_EQ(run_inspect(path("knee.rig.json"), out, err), kExitOk);
  const std::string s = out.str();
  const Rig& r = rig();
  EXPECT_EQ(s.rfind("format_version 1\n", 0), 0u);
  EXPECT_NE(s.find("checksum " + checksum_hex(r.checksum) + "\n"), std::string::npos);
  EXPECT_NE(s.find("vertices 891\n"), std::string::npos);
  EXPECT_NE(s.find("root " + std::to_string(r.skeleton.root) + "\n"), std::string::npos);
  EXPECT_NE(s.find("bone 0 " + std::to_string(r.skeleton.bones[0][0]) + "-" +
                   std::to_string(r.skeleton.bones[0][1]) + " length "),
            std::string::npos);
  EXPECT_NE(s.find("influences min 4 max 4 mean 4.0000\n"), std::string::npos);
  EXPECT_NE(s.find("weight sum min 1.000000000000 max 1.000000000000\n"),
            std::string::npos);
  std::ostringstream o2, e2;
  write_file(path("broken.rig.json"), "{\"format_version\": 1}");
  EXPECT_EQ(run_inspect(path("broken.rig.json"), o2, e2), kExitParse);
  EXPECT_EQ(e2.str().rfind("1: ", 0), 0u);
}

TEST_F(PipelineTest, CliExitCodes) {
  std::string err, out;
  EXPECT_EQ(run_cli("", &err), kExitUsage);
  EXPECT_EQ(err.rfind("64: ", 0), 0u) << err;
  EXPECT_EQ(run_cli("frobnicate", &err), kExitUsage);
  EXPECT_EQ(run_cli("rig --slices 1 '" + path("knee.obj").string() + "' -o '" +
                        path("c.json").string() + "'",
                    &err),
            kExitUsage);
  EXPECT_EQ(run_cli("rig '" + path("knee.obj").string() + "' -o '" +
                        path("cli.rig.json").string() + "'",
                    &err, &out),
            kExitOk)
      << err;
  EXPECT_TRUE(err.empty());
  EXPECT_NE(out.find("joints "), std::string::npos);
  EXPECT_EQ(read_file(path("cli.rig.json")), read_file(path("knee.rig.json")));
  EXPECT_EQ(run_cli("rig '" + path("open.obj").string() + "' -o '" +
                        path("c.json").string() + "'"),
            kExitOpenMesh);
  EXPECT_EQ(run_cli("rig '" + path("cube.obj").string() + "' -o '" +
                        path("c.json").string() + "'"),
            kExitDegenerateFrame);
  EXPECT_EQ(run_cli("inspect '" + path("cli.rig.json").string() + "'", &err, &out),
            kExitOk);
  EXPECT_NE(out.find("vertices 891"), std::string::npos);
  write_pose("cli_pose.json", rest_handles(rig().skeleton, {0, 1}));
  EXPECT_EQ(run_cli("deform '" + path("knee.obj").string() + "' '" +
                        path("cli.rig.json").string() + "' '" +
                        path("cli_pose.json").string() + "' -o '" +
                        path("cli_out.obj").string() + "' --threshold 45 --step 15",
                    &err, &out),
            kExitOk)
      << err;
  EXPECT_TRUE(fs::exists(path("cli_out.report.json")));
  const auto report = nlohmann::json::parse(read_file(path("cli_out.report.json")));
  EXPECT_NEAR(report["angle_threshold_deg"].get<double>(), 45.0, 1e-9);
  EXPECT_NEAR(report["max_step_angle_deg"].get<double>(), 15.0, 1e-9);
  EXPECT_EQ(run_cli("deform '" + path("moved.obj").string() + "' '" +
                        path("cli.rig.json").string() + "' '" +
                        path("cli_pose.json").string() + "' -o '" +
                        path("c.obj").string() + "'",
                    &err),
            kExitChecksum);
  EXPECT_EQ(err.rfind("4: ", 0), 0u);
}

}  // namespace
}  // namespace rigforge
