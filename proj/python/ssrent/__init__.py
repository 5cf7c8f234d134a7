"""Bipartite entanglement under a particle-number superselection rule."""

from ._core import *  # noqa: F401,F403
from ._core import SsrentError, PureState, QubitState, DensityMatrix

import math as _math


def vepr():
    """|0>|1> + |1>|0> on single-level qubits."""
    r = 1 / _math.sqrt(2)
    return PureState([((0, 0), (1, 0), r), ((1, 0), (0, 0), r)])


def eepr():
    """|01>|10> + |10>|01> on two-mode registers (constant local number)."""
    r = 1 / _math.sqrt(2)
    # two modes: level 1 holds |01> (index 0) and |10> (index 1)
    return PureState([((1, 0), (1, 1), r), ((1, 1), (1, 0), r)],
                     alice_degeneracy=[1, 2, 1], bob_degeneracy=[1, 2, 1])


__all__ = [n for n in dir() if not n.startswith("_")]
