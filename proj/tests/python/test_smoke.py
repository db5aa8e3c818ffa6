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

import numpy as np
import pytest

import rigforge


def test_mesh_round_trip(tube, tmp_path):
    assert tube.is_closed()
    path = tmp_path / "tube.obj"
    tube.save(path)
    again = rigforge.load_mesh(path)
    np.testing.assert_allclose(again.vertices, tube.vertices, atol=1e-12)
    np.testing.assert_array_equal(again.faces, tube.faces)
    assert again.checksum() == tube.checksum()


def test_bad_arrays_raise():
    with pytest.raises(rigforge.InvalidArgumentError):
        rigforge.Mesh(np.zeros((3, 2)), np.array([[0, 1, 2]]))
    with pytest.raises(rigforge.InvalidArgumentError):
        rigforge.Mesh(np.zeros((3, 3)), np.array([[0, 1, 7]]))
    with pytest.raises(rigforge.ParseError):
        rigforge.parse_obj("v 1 2\n")


def test_open_mesh_is_rejected():
    tri = rigforge.Mesh(np.eye(3), np.array([[0, 1, 2]]))
    with pytest.raises(rigforge.OpenMeshError):
        rigforge.build_rig(tri)
    assert issubclass(rigforge.OpenMeshError, rigforge.Error)


def test_rig_weights_partition_unity(tube, tube_rig):
    w = tube_rig.weights
    assert w.shape == (tube.num_vertices, tube_rig.num_joints)
    assert (w >= 0).all()
    np.testing.assert_allclose(w.sum(axis=1), 1.0, atol=1e-12)
    assert ((w > 0).sum(axis=1) <= 4).all()
    assert tube_rig.checksum == tube.checksum()


def test_rig_json_round_trip(tube_rig, tmp_path):
    again = rigforge.Rig.from_json(tube_rig.to_json())
    assert again.to_json() == tube_rig.to_json()
    path = tmp_path / "tube.rig.json"
    tube_rig.save(path)
    np.testing.assert_array_equal(rigforge.Rig.load(path).joints, tube_rig.joints)


def test_rest_handles_reproduce_mesh(tube, tube_rig):
    handles = {j: tuple(p) for j, p in enumerate(tube_rig.joints)}
    out = rigforge.deform(tube, tube_rig, handles)
    np.testing.assert_allclose(out["vertices"], tube.vertices, atol=1e-9)
    assert out["report"]["steps_used"] == 1
    assert out["report"]["flagged_joints"] == []
    assert rigforge.measure_distortion(tube, out["vertices"], tube_rig) < 1e-12


def test_translation_moves_mesh_rigidly(tube, tube_rig):
    shift = np.array([0.3, -1.0, 2.0])
    handles = [(j, p + shift) for j, p in enumerate(tube_rig.joints)]
    out = rigforge.deform(tube, tube_rig, handles)
    np.testing.assert_allclose(out["vertices"], tube.vertices + shift, atol=1e-9)
    np.testing.assert_allclose(out["joints"], tube_rig.joints + shift, atol=1e-9)


def test_invalid_pose_raises(tube, tube_rig):
    with pytest.raises(rigforge.InvalidPoseError):
        rigforge.deform(tube, tube_rig, {tube_rig.num_joints: (0, 0, 0)})
    with pytest.raises(rigforge.InvalidPoseError):
        rigforge.deform(tube, tube_rig, {})


def test_checksum_mismatch(tube, tube_rig):
    moved = rigforge.Mesh(tube.vertices + 1.0, tube.faces)
    with pytest.raises(rigforge.ChecksumMismatchError):
        rigforge.deform(moved, tube_rig, {0: (0, 0, 0)})
