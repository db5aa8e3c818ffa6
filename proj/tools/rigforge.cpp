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

// rigforge: rig a closed mesh, deform it with a pose, inspect rig files, or
// serve interactive sessions.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rigforge/errors.h"
#include "rigforge/pipeline.h"

#ifdef RIGFORGE_WITH_SERVICE
#include <boost/asio/io_context.hpp>
#include <boost/asio/signal_set.hpp>

#include "rigforge/service/server.h"
#endif

namespace {

#ifdef RIGFORGE_WITH_SERVICE
int run_serve(const rigforge::service::ServerOptions& options) {
  try {
    rigforge::service::Server server(options);
    server.start();
    std::cout << "listening on " << options.host << ":" << server.port()
              << std::endl;
    boost::asio::io_context signals_io;
    boost::asio::signal_set signals(signals_io, SIGINT, SIGTERM);
    signals.async_wait([&](const boost::system::error_code&, int) { server.stop(); });
    signals_io.run();
    return rigforge::kExitOk;
  } catch (const rigforge::IoError& e) {
    std::cerr << rigforge::kExitWrite << ": " << e.what() << "\n";
    return rigforge::kExitWrite;
  }
}
#endif

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rigforge: skeleton extraction, skinning and MLS deformation"};
  app.require_subcommand(1);

  rigforge::RigCommand rig;
  std::string mode = "parity";
  auto* rig_cmd = app.add_subcommand("rig", "Build a rig file for a closed mesh");
  rig_cmd->add_option("mesh", rig.mesh, "Input OBJ mesh")->required();
  rig_cmd->add_option("-o,--output", rig.out, "Output rig file")->required();
  rig_cmd->add_option("--slices", rig.options.slicing.slice_count, "Slice count")
      ->check(CLI::Range(2, 100000));
  rig_cmd->add_option("--rays", rig.options.slicing.ray_count, "Rays per slice")
      ->check(CLI::Range(8, 100000));
  rig_cmd->add_option("--mode", mode, "Slice point mode")
      ->check(CLI::IsMember({"nearest", "all", "parity", "parity-refined"}));
  rig_cmd->add_option("--angle-tol", rig.options.skeleton.angle_tolerance_deg,
                      "Decimation angle tolerance in degrees")
      ->check(CLI::Range(0.0, 180.0));
  rig_cmd->add_option("--alpha", rig.options.alpha, "Inverse-distance exponent")
      ->check(CLI::PositiveNumber);
  rig_cmd->add_flag("--smooth", rig.options.skeleton.smooth,
                    "Smooth slice-center chains before decimation");

  rigforge::DeformCommand deform;
  double threshold = 0.0, step = 0.0;
  bool no_decompose = false;
  auto* deform_cmd = app.add_subcommand("deform", "Deform a rigged mesh to a pose");
  deform_cmd->add_option("mesh", deform.mesh, "Rest OBJ mesh")->required();
  deform_cmd->add_option("rig", deform.rig, "Rig file")->required();
  deform_cmd->add_option("pose", deform.pose, "Pose file")->required();
  deform_cmd->add_option("-o,--output", deform.out, "Deformed OBJ mesh")->required();
  auto* threshold_opt = deform_cmd->add_option(
      "--threshold", threshold, "Large-angle threshold in degrees");
  auto* step_opt = deform_cmd->add_option(
      "--step", step, "Largest rotation per decomposed step in degrees");
  deform_cmd->add_flag("--no-decompose", no_decompose,
                       "Always deform in a single pass");

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a rig file");
  inspect_cmd->add_option("rig", inspect_path, "Rig file")->required();

#ifdef RIGFORGE_WITH_SERVICE
  rigforge::service::ServerOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the session service");
  serve_cmd->add_option("--host", serve.host, "Bind address");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks one)");
  serve_cmd->add_option("--threads", serve.threads, "I/O threads (0 = auto)");
  serve_cmd->add_option("--max-vertices", serve.limits.max_vertices,
                        "Largest accepted upload");
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string message = e.what();
    for (char& c : message) {
      if (c == '\n') c = ' ';
    }
    std::cerr << rigforge::kExitUsage << ": " << message << "\n";
    return rigforge::kExitUsage;
  }

  if (*rig_cmd) {
    rig.options.slicing.mode = rigforge::parse_slice_mode(mode);
    return rigforge::run_rig(rig, std::cout, std::cerr);
  }
  if (*deform_cmd) {
    if (*threshold_opt) deform.threshold_deg = threshold;
    if (*step_opt) deform.step_deg = step;
    deform.decompose = !no_decompose;
    return rigforge::run_deform(deform, std::cout, std::cerr);
  }
  if (*inspect_cmd) return rigforge::run_inspect(inspect_path, std::cout, std::cerr);
#ifdef RIGFORGE_WITH_SERVICE
  if (*serve_cmd) return run_serve(serve);
#endif
  return rigforge::kExitUsage;
}
