# Copyright 2026 The Rigforge Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Automatic rigging and skeleton-driven deformation of triangle meshes."""

from ._rigforge import (
    ChecksumMismatchError,
    DegenerateFrameError,
    EmptyMeshError,
    Error,
    InvalidArgumentError,
    InvalidPoseError,
    IoError,
    Mesh,
    NoInteriorFoundError,
    OpenMeshError,
    ParseError,
    Rig,
    SkeletonError,
    TopologyMismatchError,
    build_rig,
    deform,
    load_mesh,
    measure_distortion,
    parse_obj,
)

__version__ = "0.1.0"
