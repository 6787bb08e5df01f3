"""Effective (homogenized) model built on a limiting velocity shape.

Once the limit shape W of mean velocities is known, the large-scale front
dynamics is governed by the support function of W: the effective Hamiltonian.
The associated first-order equation has the Hopf-Lax representation

    u(x, t) = min { u0(y) : y in x - t * W },

which this module evaluates directly by sampling W.  No grids, no CFL, no
oscillations: this is the macroscopic model the averaging machinery justifies.
"""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .averaging import LimitShapeEstimate
from .exceptions import InvalidSpecError
from .fields import ScalarField
from .geometry import Polytope

__all__ = [
    "EffectiveModel",
    "effective_hamiltonian",
    "solve_homogenized",
]


@dataclass
class EffectiveModel:
    """Limit shape plus provenance, ready for macroscopic predictions."""

    shape: Polytope
    env_fingerprint: str = ""
    source_h: Optional[float] = None
    source_horizon: Optional[float] = None

    @classmethod
    def from_estimate(cls, est: LimitShapeEstimate) -> "EffectiveModel":
        return cls(shape=est.shape, env_fingerprint=est.env_fingerprint,
                   source_h=est.h, source_horizon=est.horizons[-1])

    @classmethod
    def from_interval(cls, lo: float, hi: float) -> "EffectiveModel":
        if hi < lo:
            raise InvalidSpecError("interval needs lo <= hi")
        return cls(shape=Polytope(vertices=np.array([[lo], [hi]])))

    def hamiltonian(self, p) -> np.ndarray:
        return effective_hamiltonian(self, p)


def effective_hamiltonian(model: EffectiveModel, p) -> np.ndarray:
    """Support function of the limit shape: H(p) = max over w in W of w . p.

    This is the Hamiltonian of the homogenized front equation; it is convex
    and positively one-homogeneous by construction.
    """
    pts = np.atleast_2d(np.asarray(p, dtype=float))
    if pts.shape[1] != model.shape.dim:
        raise InvalidSpecError("momentum dimension does not match the shape")
    vals = pts @ model.shape.vertices.T
    out = vals.max(axis=1)
    return out if out.size > 1 else float(out[0])


def _shape_samples(shape: Polytope, spacing: float) -> np.ndarray:
    """Vertices plus a filling grid of the hull, spaced at most `spacing`."""
    v = shape.vertices
    n = v.shape[1]
    lo = v.min(axis=0)
    hi = v.max(axis=0)
    axes = []
    for d in range(n):
        width = hi[d] - lo[d]
        cnt = max(2, int(np.ceil(width / spacing)) + 1)
        axes.append(np.linspace(lo[d], hi[d], cnt))
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    inside = shape.contains(pts, tol=1e-12)
    return np.concatenate([v, pts[inside]], axis=0)


def solve_homogenized(model: EffectiveModel, u0: Callable[[np.ndarray], np.ndarray],
                      lo, hi, h_out: float, times: Sequence[float],
                      membership_tol: Optional[float] = None) -> ScalarField:
    """Hopf-Lax evaluation of the homogenized equation on an output grid.

    ``u0`` maps an (m, n) array of points to m values and should be
    Lipschitz; the returned field stacks one frame per requested time.  The
    minimization set x - t*W is sampled with spacing ``membership_tol / t``
    (default: h_out scaled likewise), so the result is accurate to about
    Lip(u0) * membership_tol plus the sampling of u0 itself.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    n = model.shape.dim
    if lo.shape != (n,) or hi.shape != (n,):
        raise InvalidSpecError("output box dimension mismatch")
    times = [float(t) for t in times]
    if any(t < 0 for t in times):
        raise InvalidSpecError("times must be nonnegative")
    dims = np.maximum(np.ceil((hi - lo) / h_out).astype(int), 1)
    axes = [lo[d] + (np.arange(dims[d]) + 0.5) * h_out for d in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    xs = np.stack([m.ravel() for m in mesh], axis=1)
    if membership_tol is None:
        membership_tol = h_out

    frames = np.empty((len(times),) + tuple(int(d) for d in dims))
    for j, t in enumerate(times):
        if t == 0.0:
            vals = np.asarray(u0(xs), dtype=float)
        else:
            spacing = max(membership_tol / t, 1e-6)
            wpts = _shape_samples(model.shape, spacing)
            best = np.full(xs.shape[0], np.inf)
            # chunk over shape samples to bound the temporary matrices
            chunk = max(1, int(2_000_000 / max(1, xs.shape[0])))
            for start in range(0, wpts.shape[0], chunk):
                block = wpts[start:start + chunk]
                ys = xs[:, None, :] - t * block[None, :, :]
                vals_blk = np.asarray(u0(ys.reshape(-1, n)), dtype=float)
                vals_blk = vals_blk.reshape(xs.shape[0], block.shape[0])
                best = np.minimum(best, vals_blk.min(axis=1))
            vals = best
        frames[j] = vals.reshape(tuple(int(d) for d in dims))
    return ScalarField(lo=lo, h=h_out, values=frames, times=np.asarray(times))
