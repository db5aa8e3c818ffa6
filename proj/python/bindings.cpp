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


#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <string>
#include <vector>

#include "rigforge/deform.h"
#include "rigforge/distortion.h"
#include "rigforge/errors.h"
#include "rigforge/mesh.h"
#include "rigforge/rig_file.h"

namespace py = pybind11;
using namespace rigforge;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IndexArray =
    py::array_t<std::int64_t, py::array::c_style | py::array::forcecast>;

Array points_to_array(const std::vector<Vec3>& points) {
  Array out({static_cast<py::ssize_t>(points.size()), py::ssize_t{3}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int k = 0; k < 3; ++k) a(i, k) = points[i][k];
  }
  return out;
}

std::vector<Vec3> array_to_points(const Array& in, const char* what) {
  if (in.ndim() != 2 || in.shape(1) != 3) {
    throw InvalidArgumentError(std::string(what) + " must have shape (n, 3)");
  }
  auto a = in.unchecked<2>();
  std::vector<Vec3> out(a.shape(0));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) out[i] = {a(i, 0), a(i, 1), a(i, 2)};
  return out;
}

Mesh make_mesh(const Array& vertices, const IndexArray& faces) {
  Mesh mesh;
  mesh.vertices = array_to_points(vertices, "vertices");
  if (faces.ndim() != 2 || faces.shape(1) != 3) {
    throw InvalidArgumentError("faces must have shape (m, 3)");
  }
  auto f = faces.unchecked<2>();
  mesh.faces.resize(f.shape(0));
  for (py::ssize_t i = 0; i < f.shape(0); ++i) {
    for (int k = 0; k < 3; ++k) {
      if (f(i, k) < 0 || f(i, k) > 0xffffffffLL) {
        throw InvalidArgumentError("face index out of range");
      }
      mesh.faces[i][k] = static_cast<std::uint32_t>(f(i, k));
    }
  }
  check_mesh(mesh);
  return mesh;
}

IndexArray faces_to_array(const std::vector<Face>& faces) {
  IndexArray out({static_cast<py::ssize_t>(faces.size()), py::ssize_t{3}});
  auto a = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (int k = 0; k < 3; ++k) a(i, k) = faces[i][k];
  }
  return out;
}

// Accepts {joint: (x, y, z)} or a sequence of (joint, (x, y, z)).
ControlHandles to_handles(const py::object& obj) {
  ControlHandles handles;
  auto add = [&](const py::handle& joint, const py::handle& target) {
    const auto j = joint.cast<long long>();
    if (j < 0) throw InvalidPoseError("negative joint index");
    const auto t = target.cast<std::vector<double>>();
    if (t.size() != 3) throw InvalidPoseError("handle target needs 3 coordinates");
    handles.handles.push_back(
        {static_cast<std::uint32_t>(j), Vec3(t[0], t[1], t[2])});
  };
  if (py::isinstance<py::dict>(obj)) {
    for (auto item : obj.cast<py::dict>()) add(item.first, item.second);
  } else {
    for (auto item : obj) {
      auto pair = item.cast<py::sequence>();
      if (pair.size() != 2) throw InvalidPoseError("handle must be (joint, target)");
      add(pair[0], pair[1]);
    }
  }
  return handles;
}

py::dict report_dict(const DistortionReport& r) {
  py::dict d;
  d["global_distortion"] = r.global_distortion;
  std::vector<double> degrees;
  for (double a : r.per_joint_angle) degrees.push_back(a * 180.0 / M_PI);
  d["per_joint_angle_deg"] = degrees;
  d["flagged_joints"] = r.flagged_joints;
  d["per_region_distortion"] = r.per_region_distortion;
  d["steps_used"] = r.steps_used;
  d["distortion_tolerance"] = r.distortion_tolerance;
  d["within_tolerance"] = r.within_tolerance;
  return d;
}

Array weight_matrix(const Rig& rig) {
  const auto n = static_cast<py::ssize_t>(rig.binding.weights.size());
  const auto j = static_cast<py::ssize_t>(rig.skeleton.joints.size());
  Array out({n, j});
  auto a = out.mutable_unchecked<2>();
  for (py::ssize_t v = 0; v < n; ++v) {
    for (py::ssize_t k = 0; k < j; ++k) a(v, k) = 0.0;
    for (const JointWeight& w : rig.binding.weights[v]) a(v, w.joint) = w.weight;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rigforge, m) {
  m.doc() = "Automatic rigging and skeleton-driven deformation of triangle meshes.";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base);
  py::register_exception<EmptyMeshError>(m, "EmptyMeshError", base);
  py::register_exception<IoError>(m, "IoError", base);
  py::register_exception<OpenMeshError>(m, "OpenMeshError", base);
  py::register_exception<DegenerateFrameError>(m, "DegenerateFrameError", base);
  py::register_exception<NoInteriorFoundError>(m, "NoInteriorFoundError", base);
  py::register_exception<SkeletonError>(m, "SkeletonError", base);
  py::register_exception<TopologyMismatchError>(m, "TopologyMismatchError", base);
  py::register_exception<ChecksumMismatchError>(m, "ChecksumMismatchError", base);
  py::register_exception<InvalidPoseError>(m, "InvalidPoseError", base);
  py::register_exception<InvalidArgumentError>(m, "InvalidArgumentError", base);

  py::class_<Mesh>(m, "Mesh")
      .def(py::init(&make_mesh), py::arg("vertices"), py::arg("faces"))
      .def_property_readonly("vertices",
                             [](const Mesh& s) { return points_to_array(s.vertices); })
      .def_property_readonly("faces",
                             [](const Mesh& s) { return faces_to_array(s.faces); })
      .def_property_readonly("num_vertices", &Mesh::num_vertices)
      .def_property_readonly("num_faces", &Mesh::num_faces)
      .def("checksum", [](const Mesh& s) { return checksum_hex(mesh_checksum(s)); })
      .def("is_closed", [](const Mesh& s) { return validate_topology(s).is_closed; })
      .def("to_obj", &format_obj)
      .def("save", [](const Mesh& s, const std::filesystem::path& p) { save_mesh(s, p); })
      .def("__repr__", [](const Mesh& s) {
        return "<rigforge.Mesh " + std::to_string(s.num_vertices()) + " vertices, " +
               std::to_string(s.num_faces()) + " faces>";
      });

  m.def("load_mesh", [](const std::filesystem::path& p) { return load_mesh(p); },
        py::arg("path"));
  m.def("parse_obj", [](const std::string& text) { return parse_obj(text); },
        py::arg("text"));

  py::class_<Rig>(m, "Rig")
      .def_property_readonly("joints",
                             [](const Rig& r) { return points_to_array(r.skeleton.joints); })
      .def_property_readonly("bones", [](const Rig& r) { return r.skeleton.bones; })
      .def_property_readonly("root", [](const Rig& r) { return r.skeleton.root; })
      .def_property_readonly("num_joints",
                             [](const Rig& r) { return r.skeleton.joints.size(); })
      .def_property_readonly("chain_count", [](const Rig& r) { return r.chain_count; })
      .def_property_readonly("raw_center_count",
                             [](const Rig& r) { return r.raw_center_count; })
      .def_property_readonly("checksum", [](const Rig& r) { return checksum_hex(r.checksum); })
      .def_property_readonly("weights", &weight_matrix,
                             "Dense (vertices, joints) skin weight matrix.")
      .def("to_json", &format_rig)
      .def_static("from_json", &parse_rig, py::arg("text"))
      .def("save", [](const Rig& r, const std::filesystem::path& p) { save_rig(r, p); })
      .def_static("load", [](const std::filesystem::path& p) { return load_rig(p); })
      .def("__repr__", [](const Rig& r) {
        return "<rigforge.Rig " + std::to_string(r.skeleton.joints.size()) + " joints, " +
               std::to_string(r.chain_count) + " chains>";
      });

  m.def(
      "build_rig",
      [](const Mesh& mesh, int slices, int rays, const std::string& mode,
         double angle_tolerance_deg, bool smooth, double alpha) {
        RigOptions o;
        o.slicing.slice_count = slices;
        o.slicing.ray_count = rays;
        o.slicing.mode = parse_slice_mode(mode);
        o.skeleton.angle_tolerance_deg = angle_tolerance_deg;
        o.skeleton.smooth = smooth;
        o.alpha = alpha;
        py::gil_scoped_release release;
        return build_rig(mesh, o);
      },
      py::arg("mesh"), py::arg("slices") = 32, py::arg("rays") = 64,
      py::arg("mode") = "parity", py::arg("angle_tolerance_deg") = 10.0,
      py::arg("smooth") = false, py::arg("alpha") = 2.0);

  m.def(
      "deform",
      [](const Mesh& mesh, const Rig& rig, const py::object& handles,
         double threshold_deg, double step_deg, bool decompose) {
        check_rig_matches(rig, mesh);
        DeformOptions o;
        o.detector.angle_threshold = threshold_deg * M_PI / 180.0;
        o.detector.max_step_angle = step_deg * M_PI / 180.0;
        o.decompose = decompose;
        o.alpha = rig.options.alpha;
        const ControlHandles h = to_handles(handles);
        DeformResult result;
        {
          py::gil_scoped_release release;
          result = deform(mesh, rig.skeleton, rig.binding, h, o);
        }
        py::dict d;
        d["vertices"] = points_to_array(result.mesh.vertices);
        d["joints"] = points_to_array(result.joints);
        d["report"] = report_dict(result.report);
        return d;
      },
      py::arg("mesh"), py::arg("rig"), py::arg("handles"),
      py::arg("threshold_deg") = 60.0, py::arg("step_deg") = 30.0,
      py::arg("decompose") = true,
      "Moves the given joints to their targets and returns the deformed "
      "vertices, joint positions and a distortion report.");

  m.def(
      "measure_distortion",
      [](const Mesh& rest, const Array& deformed, const Rig& rig) {
        Mesh moved = rest;
        moved.vertices = array_to_points(deformed, "deformed");
        if (moved.vertices.size() != rest.vertices.size()) {
          throw TopologyMismatchError("vertex count differs from the rest mesh");
        }
        return measure_distortion(rest, moved, rig.binding).global;
      },
      py::arg("rest"), py::arg("deformed"), py::arg("rig"));
}
