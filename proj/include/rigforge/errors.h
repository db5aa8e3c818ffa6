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

#include <stdexcept>
#include <string>

namespace rigforge {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class EmptyMeshError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// The mesh has boundary or non-manifold edges where a closed surface is
/// required.
class OpenMeshError : public Error {
 public:
  using Error::Error;
};

class DegenerateFrameError : public Error {
 public:
  using Error::Error;
};

/// Every candidate slice center turned out to be outside the mesh.
class NoInteriorFoundError : public Error {
 public:
  using Error::Error;
};

class SkeletonError : public Error {
 public:
  using Error::Error;
};

class TopologyMismatchError : public Error {
 public:
  using Error::Error;
};

class ChecksumMismatchError : public Error {
 public:
  using Error::Error;
};

/// A pose or handle set refers to a joint the rig does not have.
class InvalidPoseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

}  // namespace rigforge
