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

#include <exception>
#include <filesystem>
#include <optional>
#include <ostream>

#include "rigforge/rig_file.h"

namespace rigforge {

/// Process exit statuses of the rigforge commands.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitOpenMesh = 2,
  kExitDegenerateFrame = 3,
  kExitChecksum = 4,
  kExitInvalidPose = 5,
  kExitSkeleton = 6,
  kExitWrite = 7,
  kExitUsage = 64,
};

/// Status for an exception escaping a command. IoError maps to kExitParse
/// (unreadable input); write failures are reported by the commands
/// themselves.
int exit_code_for(const std::exception& error);

struct RigCommand {
  std::filesystem::path mesh;
  std::filesystem::path out;
  RigOptions options;
};

struct DeformCommand {
  std::filesystem::path mesh;
  std::filesystem::path rig;
  std::filesystem::path pose;
  std::filesystem::path out;
  std::optional<double> threshold_deg;
  std::optional<double> step_deg;
  bool decompose = true;
};

/// Each command prints a summary to `out` and, on failure, one
/// `<code>: <message>` line to `err`, returning the exit status.
int run_rig(const RigCommand& cmd, std::ostream& out, std::ostream& err);
int run_deform(const DeformCommand& cmd, std::ostream& out, std::ostream& err);
int run_inspect(const std::filesystem::path& rig, std::ostream& out,
                std::ostream& err);

}  // namespace rigforge
