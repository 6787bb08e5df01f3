"""Gridded scalar fields (value functions, minimal-time maps)."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .exceptions import InvalidSpecError

__all__ = ["ScalarField"]


@dataclass
class ScalarField:
    """Values sampled on a uniform grid, optionally at several times.

    ``values`` has shape ``(*spatial,)`` for a static field or
    ``(nt, *spatial)`` when ``times`` is given.  Cell centers sit at
    ``lo + (i + 0.5) * h``, matching the occupancy grids.
    """

    lo: np.ndarray
    h: float
    values: np.ndarray
    times: Optional[np.ndarray] = None

    def __post_init__(self):
        self.lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        self.values = np.asarray(self.values, dtype=float)
        if self.times is not None:
            self.times = np.asarray(self.times, dtype=float)
            if self.values.shape[0] != self.times.size:
                raise InvalidSpecError("leading axis of values must match times")

    @property
    def dim(self) -> int:
        return self.lo.size

    def _spatial_shape(self):
        return self.values.shape[1:] if self.times is not None else self.values.shape

    def _interp_space(self, frame: np.ndarray, pts: np.ndarray) -> np.ndarray:
        """Multilinear interpolation of one spatial frame at pts (m, n)."""
        shape = frame.shape
        n = len(shape)
        # cell-center coordinates: clamp into the valid interpolation range
        u = (pts - self.lo[None, :]) / self.h - 0.5
        out = np.zeros(pts.shape[0])
        i0 = np.empty((pts.shape[0], n), dtype=np.int64)
        w = np.empty((pts.shape[0], n))
        for d in range(n):
            ud = np.clip(u[:, d], 0.0, shape[d] - 1.0)
            f = np.floor(ud)
            i0[:, d] = np.minimum(f.astype(np.int64), shape[d] - 2) if shape[d] > 1 else 0
            w[:, d] = ud - i0[:, d]
        for corner in range(1 << n):
            idx = []
            cw = np.ones(pts.shape[0])
            for d in range(n):
                bit = (corner >> d) & 1
                step = bit if shape[d] > 1 else 0
                idx.append(i0[:, d] + step)
                cw = cw * (w[:, d] if bit else (1.0 - w[:, d]))
            out += cw * frame[tuple(idx)]
        return out

    def sample(self, points: np.ndarray, t: Optional[float] = None) -> np.ndarray:
        """Interpolate values at physical points, linearly in space and time."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.times is None:
            return self._interp_space(self.values, pts)
        if t is None:
            raise InvalidSpecError("time-dependent field requires t")
        tt = np.clip(t, self.times[0], self.times[-1])
        j = int(np.searchsorted(self.times, tt, side="right") - 1)
        j = min(max(j, 0), self.times.size - 2) if self.times.size > 1 else 0
        if self.times.size == 1:
            return self._interp_space(self.values[0], pts)
        t0, t1 = self.times[j], self.times[j + 1]
        lam = 0.0 if t1 == t0 else (tt - t0) / (t1 - t0)
        a = self._interp_space(self.values[j], pts)
        b = self._interp_space(self.values[j + 1], pts)
        return (1.0 - lam) * a + lam * b

    def to_csv(self, path) -> None:
        """Write rows ``t, x1..xn, value`` with full float precision."""
        shape = self._spatial_shape()
        axes = [self.lo[d] + (np.arange(shape[d]) + 0.5) * self.h
                for d in range(self.dim)]
        mesh = np.meshgrid(*axes, indexing="ij")
        coords = np.stack([m.ravel() for m in mesh], axis=1)
        frames = self.values if self.times is not None else self.values[None]
        tvals = self.times if self.times is not None else np.zeros(1)
        with open(path, "w") as f:
            cols = ["t"] + [f"x{d + 1}" for d in range(self.dim)] + ["value"]
            f.write(",".join(cols) + "\n")
            for j in range(frames.shape[0]):
                vals = frames[j].ravel()
                for r in range(coords.shape[0]):
                    parts = [f"{tvals[j]:.17g}"]
                    parts += [f"{c:.17g}" for c in coords[r]]
                    parts.append(f"{vals[r]:.17g}")
                    f.write(",".join(parts) + "\n")
