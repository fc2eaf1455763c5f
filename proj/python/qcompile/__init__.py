# Copyright 2026 The qcompile Authors
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

"""Python bindings for the qcompile gate-sequence compiler."""

from ._core import *  # noqa: F401,F403
from ._core import Unitary

__version__ = "0.1.0"


def to_numpy(u: Unitary):
    """Dense numpy copy of a Unitary."""
    import numpy as np

    return np.array(u.rows(), dtype=complex)


def from_numpy(a) -> Unitary:
    """Unitary from a square complex array (unitarity is checked)."""
    return Unitary([[complex(x) for x in row] for row in a])
