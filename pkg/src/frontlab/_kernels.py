"""Numba inner loops for the front engines.

Arrays come in flattened (C order); offsets are precomputed flat-index deltas
with their physical lengths.  Callers guarantee that every active cell sits at
least a stencil radius away from the window boundary, so no bounds checks are
needed here.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def scatter_surplus(s, act, gain, odelta, odist, cap):
    """Max-plus push: s[c+o] = max(s[c+o], min(gain[c] - |o|, cap))."""
    for k in range(act.size):
        c = act[k]
        g = gain[k]
        for m in range(odelta.size):
            v = g - odist[m]
            q = c + odelta[m]
            if v > s[q]:
                s[q] = v if v < cap else cap


@njit(cache=True)
def scatter_strict(occ, arrival, parent, act, radii, odelta, odist, step_idx):
    """Boolean push with first-arrival parent recording.

    A hop from c lands on every cell within radii[k]; cells occupied for the
    first time remember the step index and the predecessor cell.
    """
    for k in range(act.size):
        c = act[k]
        r = radii[k]
        for m in range(odelta.size):
            if odist[m] <= r:
                q = c + odelta[m]
                if occ[q] == 0:
                    occ[q] = 1
                    arrival[q] = step_idx
                    parent[q] = c
