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

#include "rigforge/distortion.h"
#include "rigforge/mls_deformer.h"

namespace rigforge {

struct DeformOptions {
  DetectorConfig detector;
  /// Split flagged rotations into steps; false forces a single pass.
  bool decompose = true;
  double alpha = 2.0;
};

struct DeformResult {
  Mesh mesh;
  DistortionReport report;
  /// Joints after the deformation.
  std::vector<Vec3> joints;
};

/// Full deformation of `mesh` for one handle set: solve, detect large
/// rotations, decompose when needed, blend, and measure distortion against
/// `mesh`. Throws InvalidPoseError for a bad handle set.
DeformResult deform(const Mesh& mesh, const Skeleton& skeleton,
                    const SkinBinding& binding, const ControlHandles& handles,
                    const DeformOptions& options = {});

}  // namespace rigforge
