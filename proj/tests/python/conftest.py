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


def capped_tube(length=4.0, radius=0.5, rings=24, sides=16):
    """Closed cylinder along x with outward-facing triangles."""
    verts = []
    for i in range(rings + 1):
        x = length * i / rings
        for k in range(sides):
            a = 2.0 * np.pi * k / sides
            verts.append((x, radius * np.cos(a), radius * np.sin(a)))
    start = len(verts)
    verts.append((0.0, 0.0, 0.0))
    verts.append((length, 0.0, 0.0))
    faces = []
    for i in range(rings):
        for k in range(sides):
            a = i * sides + k
            b = i * sides + (k + 1) % sides
            c = a + sides
            d = b + sides
            faces.append((a, b, d))
            faces.append((a, d, c))
    for k in range(sides):
        faces.append((start, (k + 1) % sides, k))
        top = rings * sides
        faces.append((start + 1, top + k, top + (k + 1) % sides))
    return rigforge.Mesh(np.array(verts), np.array(faces))


@pytest.fixture(scope="session")
def tube():
    return capped_tube()


@pytest.fixture(scope="session")
def tube_rig(tube):
    return rigforge.build_rig(tube, slices=24)
