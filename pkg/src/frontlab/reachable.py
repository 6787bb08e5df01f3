"""Reachable-set computation by front propagation on a uniform grid.

The workhorse is :class:`FrontStepper`, which advances an inner approximation
of the reachable set of ``|gamma' - b| <= a(gamma, t)`` in fixed time steps.
Two modes are supported:

``surplus``
    Each cell carries a signed sub-cell surplus ``s`` with the invariant that
    the closed ball ``B(center, s)`` is contained in the reachable set
    (negative values mean the front is still ``|s|`` away).  One step is a
    max-plus dilation ``s'(q) = max_c min(cap, s(c) + a*dt - |q - c - b*dt|)``
    with the speed evaluated at the advancing ball edge and at the half-step
    time.  This kills the O(1) rasterization bias of a plain boolean
    dilation and converges at first order in h.

``strict``
    Boolean occupancy where a hop from cell c is allowed only if its length
    satisfies ``|q - c - b*dt| <= a(c, t) * dt`` with the speed at the source
    center and the left endpoint in time.  Every recorded transition is a
    certificate: hop speeds never exceed the sampled bound, so discrete paths
    extracted from the parent table validate within the tolerance returned in
    ``claimed_tol``.  The price is an O(h/dt) speed deficit.

Both modes require the advance condition ``dt >= 2 sqrt(n) h / alpha`` so a
single step always clears at least one cell diagonal.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from . import _kernels
from .exceptions import (
    EmptySetError,
    InvalidSpecError,
    NoParentsError,
    RequiresAutonomousError,
    UnreachableError,
    WindowOverflowError,
)
from .fields import ScalarField
from .geometry import GridSet, hausdorff

__all__ = [
    "FrontStepper",
    "ReachResult",
    "reach",
    "reach_step",
    "reach_enlarged",
    "translate_check",
    "minimal_time",
    "extract_discrete_path",
]

NEG = -1.0e18
NEG_CUT = -1.0e17
MAX_ENGINE_CELLS = 80_000_000


def _as_point(x, dim):
    p = np.atleast_1d(np.asarray(x, dtype=float))
    if p.shape != (dim,):
        raise InvalidSpecError(f"expected a point of dimension {dim}, got shape {p.shape}")
    return p


def _offsets_within(dim: int, r_cells: int):
    """Integer offsets with Euclidean length <= r_cells, as (m, dim) array."""
    rng = np.arange(-r_cells, r_cells + 1)
    grids = np.meshgrid(*([rng] * dim), indexing="ij")
    offs = np.stack([g.ravel() for g in grids], axis=1)
    keep = np.einsum("ij,ij->i", offs, offs) <= r_cells * r_cells
    return offs[keep]


@dataclass
class ReachResult:
    """Inner grid approximation of a reachable set plus provenance."""

    grid: GridSet
    s: float
    t: float
    dt: float
    mode: str
    env_fingerprint: str
    seed_lo: np.ndarray
    seed_hi: np.ndarray
    surplus: Optional[np.ndarray] = None
    slack: dict = field(default_factory=dict)
    claimed_tol: Optional[float] = None
    arrival: Optional[np.ndarray] = None
    parent: Optional[np.ndarray] = None
    step_times: Optional[np.ndarray] = None
    snapshots: list = field(default_factory=list)

    @property
    def h(self) -> float:
        return self.grid.h

    def endpoints(self) -> Tuple[float, float]:
        """Sub-cell interval endpoints; only meaningful in one dimension."""
        if self.grid.lo.size != 1 or self.surplus is None:
            raise InvalidSpecError("endpoints() needs a 1-d surplus-mode result")
        sflat = self.surplus.ravel()
        fin = sflat > NEG_CUT
        if not fin.any():
            raise EmptySetError("front field is empty")
        pos = self.grid.lo[0] + (np.nonzero(fin)[0] + 0.5) * self.grid.h
        sv = sflat[fin]
        return float(np.min(pos - sv)), float(np.max(pos + sv))


class FrontStepper:
    """Stateful front propagator; see the module docstring for the schemes."""

    def __init__(self, env, start, s: float = 0.0, t_end: float = 1.0,
                 h: float = 1.0 / 64, dt: Optional[float] = None,
                 mode: str = "surplus", record_parents: bool = False,
                 window: Optional[Tuple] = None):
        self.env = env
        n = env.dim
        self.n = n
        self.h = float(h)
        self.mode = mode
        if mode not in ("surplus", "strict"):
            raise InvalidSpecError(f"unknown mode {mode!r}")
        dt_min = 2.0 * math.sqrt(n) * self.h / env.alpha
        if dt is None:
            dt = dt_min
        self.dt = float(dt)
        if self.dt < dt_min * (1.0 - 1e-9):
            raise InvalidSpecError(
                f"dt={self.dt:g} violates the advance condition (needs >= {dt_min:g})")
        self.t0 = float(s)
        self.t = float(s)
        self.t_end = float(t_end)

        b = env.drift(np.zeros(n), 0.0) if env.has_drift else None
        self.b = None if b is None else np.asarray(b, dtype=float).reshape(n)
        sup_b = float(env.sup_drift)
        self.beta_eff = env.beta + sup_b

        if mode == "surplus":
            self.r_st = int(math.ceil(self.beta_eff * self.dt / self.h)) + 3
        else:
            self.r_st = int(math.ceil(self.beta_eff * self.dt / self.h)) + 1
        self.cap = self.beta_eff * self.dt + 2.0 * math.sqrt(n) * self.h
        self.prune = self.r_st * self.h + self.cap
        self.margin = self.r_st + 2

        seed_lo, seed_hi = self._seed_bounds(start)
        self.seed_lo, self.seed_hi = seed_lo, seed_hi
        if window is None:
            # the active band trails the front by up to `prune`, and the
            # margin test must never fire on a legitimate run
            pad = ((self.t_end - self.t0) * self.beta_eff + self.prune
                   + (self.margin + 4) * self.h)
            lo_raw = seed_lo - pad
            hi_raw = seed_hi + pad
        else:
            lo_raw = np.asarray(window[0], dtype=float)
            hi_raw = np.asarray(window[1], dtype=float)
        self.lo = np.floor(lo_raw / self.h) * self.h
        dims = np.ceil((hi_raw - self.lo) / self.h).astype(np.int64)
        if np.any(dims <= 2 * self.margin):
            raise InvalidSpecError("window too small for the stencil margin")
        if int(np.prod(dims)) > MAX_ENGINE_CELLS:
            raise WindowOverflowError(
                f"window needs {int(np.prod(dims))} cells (limit {MAX_ENGINE_CELLS}); "
                "use a coarser h or a smaller horizon")
        self.dims = tuple(int(d) for d in dims)
        self.strides = np.array(
            [int(np.prod(self.dims[d + 1:])) for d in range(n)], dtype=np.int64)

        offs = _offsets_within(n, self.r_st)
        self.odelta = offs @ self.strides
        self.off_phys = offs.astype(float) * self.h
        self.odist = np.linalg.norm(self.off_phys, axis=1)

        ncell = int(np.prod(self.dims))
        if mode == "surplus":
            self.sfield = np.full(ncell, NEG)
            self.occ = None
        else:
            self.occ = np.zeros(ncell, dtype=np.uint8)
            self.sfield = None
        if mode == "strict":
            # parent tables are cheap at strict-mode scales; always keep them
            self.arrival = np.full(ncell, -1, dtype=np.int64)
            self.parent = np.full(ncell, -1, dtype=np.int64)
        else:
            self.arrival = None
            self.parent = None
        self.step_times: List[float] = [self.t0]
        self.n_steps = 0
        self._seed(start)

    # -- seeding ---------------------------------------------------------

    def _seed_bounds(self, start):
        if isinstance(start, GridSet):
            start.require_nonempty()
            pts = start.occupied_points()
            return pts.min(axis=0), pts.max(axis=0)
        if isinstance(start, tuple) and len(start) == 2:
            lo = np.atleast_1d(np.asarray(start[0], dtype=float))
            hi = np.atleast_1d(np.asarray(start[1], dtype=float))
            if lo.shape != (self.n,) or hi.shape != (self.n,) or np.any(hi < lo):
                raise InvalidSpecError("box seed needs lo <= hi of the right dimension")
            return lo, hi
        p = _as_point(start, self.n)
        return p.copy(), p.copy()

    def _cell_of(self, x) -> np.ndarray:
        return np.floor((np.asarray(x, dtype=float) - self.lo) / self.h).astype(np.int64)

    def _centers(self, flat_idx: np.ndarray) -> np.ndarray:
        multi = np.unravel_index(flat_idx, self.dims)
        pos = np.empty((flat_idx.size, self.n))
        for d in range(self.n):
            pos[:, d] = self.lo[d] + (multi[d] + 0.5) * self.h
        return pos

    def _seed(self, start):
        if isinstance(start, GridSet):
            idx = np.nonzero(start.occ.ravel())[0]
            pts = start.occupied_points()
            cells = np.floor((pts - self.lo) / self.h).astype(np.int64)
            flat = cells @ self.strides
            if self.mode == "surplus":
                self.sfield[flat] = 0.0
            else:
                self.occ[flat] = 1
                if self.arrival is not None:
                    self.arrival[flat] = 0
            del idx
            return
        if isinstance(start, tuple):
            lo, hi = self.seed_lo, self.seed_hi
            ilo = self._cell_of(lo - 2 * self.h)
            ihi = self._cell_of(hi + 2 * self.h) + 1
            ranges = [np.arange(ilo[d], ihi[d]) for d in range(self.n)]
            mesh = np.meshgrid(*ranges, indexing="ij")
            cells = np.stack([m.ravel() for m in mesh], axis=1)
            pos = self.lo[None, :] + (cells + 0.5) * self.h
            # signed distance to the box: positive inside, -Euclidean outside
            below = np.maximum(lo[None, :] - pos, 0.0)
            above = np.maximum(pos - hi[None, :], 0.0)
            outside = np.sqrt(np.sum((below + above) ** 2, axis=1))
            inner = np.min(np.minimum(pos - lo[None, :], hi[None, :] - pos), axis=1)
            sd = np.where(outside > 0.0, -outside, inner)
            flat = cells @ self.strides
            if self.mode == "surplus":
                self.sfield[flat] = np.minimum(sd, self.cap)
            else:
                self.occ[flat[sd >= 0.0]] = 1
                if self.arrival is not None:
                    self.arrival[flat[sd >= 0.0]] = 0
            return
        x = _as_point(start, self.n)
        c0 = self._cell_of(x)
        if self.mode == "strict":
            flat0 = int(c0 @ self.strides)
            self.occ[flat0] = 1
            if self.arrival is not None:
                self.arrival[flat0] = 0
            return
        offs = _offsets_within(self.n, self.r_st)
        cells = c0[None, :] + offs
        flat = cells @ self.strides
        pos = self.lo[None, :] + (cells + 0.5) * self.h
        self.sfield[flat] = -np.linalg.norm(pos - x[None, :], axis=1)

    # -- stepping --------------------------------------------------------

    def _check_margin(self, multi):
        for d in range(self.n):
            if multi[d].size == 0:
                continue
            if multi[d].min() < self.margin or multi[d].max() >= self.dims[d] - self.margin:
                raise WindowOverflowError(
                    "front reached the window margin; enlarge the window or "
                    "shorten the horizon")

    def _step_surplus(self, step: float, t_left: float, t_mid: float):
        s = self.sfield
        band = (s > NEG_CUT) & (s < self.cap)
        idx = np.nonzero(band)[0]
        if idx.size == 0:
            return
        multi = np.unravel_index(idx, self.dims)
        self._check_margin(multi)
        pos = np.empty((idx.size, self.n))
        for d in range(self.n):
            pos[:, d] = self.lo[d] + (multi[d] + 0.5) * self.h
        sv = s[idx]

        # outward unit direction from the surplus gradient
        g = np.empty((idx.size, self.n))
        for d in range(self.n):
            sp = s[idx + self.strides[d]]
            sm = s[idx - self.strides[d]]
            sp = np.where(sp < NEG_CUT, sv - self.h, sp)
            sm = np.where(sm < NEG_CUT, sv - self.h, sm)
            g[:, d] = (sp - sm) / (2.0 * self.h)
        nrm = np.linalg.norm(g, axis=1)
        u = np.zeros_like(g)
        np.divide(g, nrm[:, None], out=u, where=nrm[:, None] > 1e-12)
        u = -u

        # RK2 midpoint for the frontier: sample at the current ball edge,
        # extrapolate half a step outward, then sample the push speed there
        ball_edge = pos + sv[:, None] * u
        a_seed = np.asarray(self.env.speed(ball_edge, t_mid), dtype=float)
        edge = pos + (sv + 0.5 * a_seed * step)[:, None] * u
        if self.b is not None:
            edge = edge + 0.5 * step * self.b[None, :]
        a_edge = np.asarray(self.env.speed(edge, t_mid), dtype=float)
        gain = sv + a_edge * step

        if self.b is not None:
            od = np.linalg.norm(self.off_phys - step * self.b[None, :], axis=1)
        else:
            od = self.odist if step == self.dt else self.odist.copy()
        _kernels.scatter_surplus(s, idx, gain, self.odelta, od, self.cap)
        np.place(s, s < -self.prune, NEG)

    def _step_strict(self, step: float, t_left: float):
        idx = np.nonzero(self.occ)[0]
        if idx.size == 0:
            raise EmptySetError("strict front has no occupied cells")
        multi = np.unravel_index(idx, self.dims)
        self._check_margin(multi)
        pos = np.empty((idx.size, self.n))
        for d in range(self.n):
            pos[:, d] = self.lo[d] + (multi[d] + 0.5) * self.h
        radii = np.asarray(self.env.speed(pos, t_left), dtype=float) * step
        if self.b is not None:
            od = np.linalg.norm(self.off_phys - step * self.b[None, :], axis=1)
        else:
            od = self.odist
        _kernels.scatter_strict(self.occ, self.arrival, self.parent,
                                idx, radii, self.odelta, od, self.n_steps + 1)

    def advance_to(self, target: float) -> None:
        """Step the front forward until the internal clock reaches target."""
        if target > self.t_end + 1e-12:
            raise InvalidSpecError("advance_to beyond the configured horizon")
        tol = 1e-12 * max(1.0, abs(target))
        while self.t < target - tol:
            rem = target - self.t
            step = self.dt if rem > self.dt else rem
            t_left = self.t
            t_mid = self.t + 0.5 * step
            if self.mode == "surplus":
                self._step_surplus(step, t_left, t_mid)
            else:
                self._step_strict(step, t_left)
            self.n_steps += 1
            self.t = self.t + step
            self.step_times.append(self.t)

    # -- extraction ------------------------------------------------------

    def grid_set(self) -> GridSet:
        if self.mode == "surplus":
            occ = (self.sfield >= 0.0).reshape(self.dims)
        else:
            occ = self.occ.astype(bool).reshape(self.dims)
        return GridSet(lo=self.lo.copy(), h=self.h, occ=occ)

    def _slack_model(self) -> dict:
        elapsed = self.t - self.t0
        lip = self.env.lipschitz_x()
        outer = (2.0 * math.sqrt(self.n) * self.h + self.beta_eff * self.dt
                 + lip * self.beta_eff * self.dt * elapsed)
        inner = outer
        if self.mode == "strict":
            inner = inner + (self.h / self.dt) * elapsed
        return {"h": self.h, "dt": self.dt, "outer": outer, "inner": inner,
                "lipschitz_x": lip}

    def _cone_check(self, grid: GridSet, slack: dict) -> None:
        pts = grid.occupied_points()
        cs = 0.5 * (self.seed_lo + self.seed_hi)
        seed_rad = 0.5 * float(np.linalg.norm(self.seed_hi - self.seed_lo))
        elapsed = self.t - self.t0
        outer_bound = elapsed * self.beta_eff + seed_rad + 2.0 * slack["outer"] + 1e-9
        d2 = np.sum((pts - cs[None, :]) ** 2, axis=1)
        rmax = math.sqrt(float(d2.max())) if d2.size else 0.0
        assert rmax <= outer_bound, (
            f"outer cone bound violated: {rmax:.6g} > {outer_bound:.6g}")
        eta = self.env.alpha - float(self.env.sup_drift)
        if eta > 0.0 and self.mode == "surplus":
            inner_r = elapsed * eta - 2.0 * slack["inner"]
            if inner_r > 0.0:
                dirs = np.concatenate([np.eye(self.n), -np.eye(self.n)], axis=0)
                supp = (pts - cs[None, :]) @ dirs.T
                smax = supp.max(axis=0)
                assert np.all(smax >= inner_r - 1e-9), (
                    "inner cone bound violated along a coordinate direction")

    def result(self, snapshots: Optional[list] = None) -> ReachResult:
        grid = self.grid_set()
        slack = self._slack_model()
        self._cone_check(grid, slack)
        claimed = None
        if self.mode == "strict":
            x = ((self.env.lipschitz_x() * self.beta_eff + self.env.lipschitz_t())
                 * self.dt / self.env.alpha)
            hard = (self.env.beta + 2.0 * self.env.sup_drift) / self.env.alpha - 1.0
            claimed = min(x / (1.0 - x), hard) if x < 0.5 else hard
        return ReachResult(
            grid=grid, s=self.t0, t=self.t, dt=self.dt, mode=self.mode,
            env_fingerprint=self.env.fingerprint(),
            seed_lo=self.seed_lo.copy(), seed_hi=self.seed_hi.copy(),
            surplus=None if self.sfield is None else self.sfield.reshape(self.dims).copy(),
            slack=slack, claimed_tol=claimed,
            arrival=None if self.arrival is None else self.arrival.reshape(self.dims).copy(),
            parent=None if self.parent is None else self.parent.reshape(self.dims).copy(),
            step_times=np.asarray(self.step_times),
            snapshots=snapshots or [],
        )


def reach(env, start, s: float, t: float, h: float = 1.0 / 64,
          dt: Optional[float] = None, mode: str = "surplus",
          record_parents: bool = False, window: Optional[Tuple] = None,
          snapshot_times=None, snapshot_fn=None) -> ReachResult:
    """Reachable set R_t(start, s) as an inner grid approximation.

    ``start`` is a point, a GridSet, or a ``(lo, hi)`` box.  When
    ``snapshot_times`` is given, the front pauses at each listed time and
    stores ``snapshot_fn(grid)`` (the raw GridSet by default) in the result.
    """
    if t < s:
        raise InvalidSpecError("reach needs t >= s")
    stepper = FrontStepper(env, start, s=s, t_end=t, h=h, dt=dt, mode=mode,
                           record_parents=record_parents, window=window)
    snaps = []
    if snapshot_times is not None:
        for tq in sorted(float(q) for q in snapshot_times):
            if tq < s or tq > t + 1e-12:
                raise InvalidSpecError("snapshot times must lie in [s, t]")
            stepper.advance_to(tq)
            g = stepper.grid_set()
            snaps.append((tq, snapshot_fn(g) if snapshot_fn is not None else g))
    stepper.advance_to(t)
    return stepper.result(snapshots=snaps)


def reach_enlarged(env, s: float, t: float, h: float = 1.0 / 64,
                   dt: Optional[float] = None, mode: str = "surplus",
                   window: Optional[Tuple] = None, snapshot_times=None,
                   snapshot_fn=None) -> ReachResult:
    """Reachable set grown from the unit box seed [0, 1]^n."""
    n = env.dim
    return reach(env, (np.zeros(n), np.ones(n)), s, t, h=h, dt=dt, mode=mode,
                 window=window, snapshot_times=snapshot_times, snapshot_fn=snapshot_fn)


def reach_step(env, grid: GridSet, t: float, dt: float) -> GridSet:
    """One boolean dilation step: the union of speed balls around occupied cells.

    Marks every cell center q with ``|q - c - b*dt| <= a(c, t) * dt`` for some
    occupied center c, on a window enlarged by the stencil radius.  This is
    the elementary contract operation; iterating it accumulates an O(1)
    rasterization bias, which is why :func:`reach` uses the surplus scheme
    instead.
    """
    grid.require_nonempty()
    n = grid.lo.size
    h = grid.h
    dt_min = 2.0 * math.sqrt(n) * h / env.alpha
    if dt < dt_min * (1.0 - 1e-9):
        raise InvalidSpecError(
            f"dt={dt:g} violates the advance condition (needs >= {dt_min:g})")
    sup_b = float(env.sup_drift)
    r = int(math.ceil((env.beta + sup_b) * dt / h)) + 1
    offs = _offsets_within(n, r)
    pts = grid.occupied_points()
    a = np.asarray(env.speed(pts, t), dtype=float) * dt
    if env.has_drift:
        bdt = np.asarray(env.drift(np.zeros(n), t), dtype=float).reshape(n) * dt
    else:
        bdt = np.zeros(n)
    dims_out = tuple(int(d) + 2 * r for d in grid.occ.shape)
    out = np.zeros(dims_out, dtype=bool)
    occ_idx = np.argwhere(grid.occ) + r
    for o in offs:
        dist = float(np.linalg.norm(o * h - bdt))
        sel = a >= dist
        if not sel.any():
            continue
        tgt = occ_idx[sel] + o
        out[tuple(tgt.T)] = True
    return GridSet(lo=grid.lo - r * h, h=h, occ=out)


def translate_check(env, start, s: float, t: float, h: float, dt: float,
                    shift: np.ndarray, k: int,
                    window: Optional[Tuple] = None) -> dict:
    """Hausdorff discrepancies for the two invariance identities.

    Spatial: reach from start+z equals reach from start translated by the
    integer vector z.  Temporal: reach over [s+k, t+k] in the original field
    equals reach over [s, t] in the field shifted by the integer k.  Both
    discrepancies are 0.0 when the runs agree cell by cell, which they do for
    dyadic h and dt because the speed evaluations are then bitwise equal.
    """
    z = np.atleast_1d(np.asarray(shift, dtype=float))
    if z.shape != (env.dim,) or np.any(z != np.round(z)):
        raise InvalidSpecError("spatial shift must be an integer vector")
    if int(k) != k:
        raise InvalidSpecError("time shift must be an integer")
    cells = z / h
    if np.any(np.abs(cells - np.round(cells)) > 1e-9):
        raise InvalidSpecError("1/h must be an integer so z aligns with the lattice")

    base = reach(env, start, s, t, h=h, dt=dt, window=window)
    win2 = None
    if window is not None:
        win2 = (np.asarray(window[0], dtype=float) + z,
                np.asarray(window[1], dtype=float) + z)
    moved = reach(env, np.asarray(start, dtype=float) + z, s, t, h=h, dt=dt,
                  window=win2)
    translated = GridSet(lo=base.grid.lo + z, h=h, occ=base.grid.occ)
    if (moved.grid.occ.shape == translated.occ.shape
            and np.allclose(moved.grid.lo, translated.lo)
            and np.array_equal(moved.grid.occ, translated.occ)):
        d_space = 0.0
    else:
        d_space = hausdorff(moved.grid, translated)

    late = reach(env, start, s + k, t + k, h=h, dt=dt, window=window)
    shifted_env = env.shift_time(int(k))
    early = reach(shifted_env, start, s, t, h=h, dt=dt, window=window)
    if (late.grid.occ.shape == early.grid.occ.shape
            and np.array_equal(late.grid.occ, early.grid.occ)):
        d_time = 0.0
    else:
        d_time = hausdorff(late.grid, early.grid)
    return {"translation": float(d_space), "time_shift": float(d_time)}


def minimal_time(env, x0, window: Tuple, h: float,
                 connectivity: int = 2) -> ScalarField:
    """Minimal arrival time from x0 on a grid graph, for autonomous fields.

    Edge travel times solve ``|q - p - b * tau| = a((p+q)/2) * tau`` exactly,
    then Dijkstra propagates them.  The lattice direction set biases times
    upward by a metric factor (about 8% for 8-neighbor stencils, 3% with the
    knight moves of connectivity 3), on top of the O(h) discretization error.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import dijkstra

    if not env.autonomous:
        raise RequiresAutonomousError(
            "minimal-time map is defined for autonomous speed fields only")
    n = env.dim
    x0 = _as_point(x0, n)
    lo = np.floor(np.asarray(window[0], dtype=float) / h) * h
    hi = np.asarray(window[1], dtype=float)
    dims = np.ceil((hi - lo) / h).astype(np.int64)
    if np.any(dims < 3):
        raise InvalidSpecError("minimal_time window too small")
    ncell = int(np.prod(dims))
    if ncell > 4_000_000:
        raise WindowOverflowError("minimal_time window too large; coarsen h")
    strides = np.array([int(np.prod(dims[d + 1:])) for d in range(n)], dtype=np.int64)

    def box_offsets(r):
        rng = np.arange(-r, r + 1)
        grids = np.meshgrid(*([rng] * n), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1)

    if connectivity == 1:
        offs = [o for o in box_offsets(1) if np.sum(np.abs(o)) == 1]
    elif connectivity == 2:
        offs = [o for o in box_offsets(1) if np.any(o)]
    elif connectivity == 3:
        # primitive directions up to sup-norm 2: adds the knight moves
        offs = [o for o in box_offsets(2)
                if np.any(o) and math.gcd(*[int(abs(v)) for v in o] if n > 1
                                          else [int(abs(o[0])), 0]) == 1]
    else:
        raise InvalidSpecError("connectivity must be 1, 2, or 3")

    if env.has_drift:
        b = np.asarray(env.drift(np.zeros(n), 0.0), dtype=float).reshape(n)
    else:
        b = np.zeros(n)
    b2 = float(b @ b)

    idx_all = np.arange(ncell, dtype=np.int64)
    multi = np.stack(np.unravel_index(idx_all, tuple(int(d) for d in dims)), axis=1)
    rows, cols, vals = [], [], []
    for o in offs:
        ok = np.ones(ncell, dtype=bool)
        for d in range(n):
            ok &= (multi[:, d] + o[d] >= 0) & (multi[:, d] + o[d] < dims[d])
        src = idx_all[ok]
        dst = src + int(o @ strides)
        mids = lo[None, :] + (multi[ok] + 0.5 + 0.5 * o[None, :]) * h
        a = np.asarray(env.speed(mids, 0.0), dtype=float)
        e = o.astype(float) * h
        e2 = float(e @ e)
        eb = float(e @ b)
        disc = eb * eb + (a * a - b2) * e2
        # positive root of |e - b*tau| = a*tau: travel time along the edge
        tau = (-eb + np.sqrt(disc)) / (a * a - b2)
        rows.append(src)
        cols.append(dst)
        vals.append(tau)
    graph = coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(ncell, ncell)).tocsr()
    c0 = np.floor((x0 - lo) / h).astype(np.int64)
    if np.any(c0 < 0) or np.any(c0 >= dims):
        raise InvalidSpecError("x0 lies outside the minimal_time window")
    src_idx = int(c0 @ strides)
    dist = dijkstra(graph, indices=src_idx)
    return ScalarField(lo=lo, h=h, values=dist.reshape(tuple(int(d) for d in dims)))


def extract_discrete_path(result: ReachResult, target) -> List[Tuple[float, np.ndarray]]:
    """Backtrack the parent table to a knot sequence (time, point).

    Waiting periods show up as repeated points at different times.  The path
    starts at the seed cell's center, so it can sit up to half a cell diagonal
    from the continuous start point.
    """
    if result.arrival is None or result.parent is None:
        raise NoParentsError("run reach(..., mode='strict') to record parents first")
    grid = result.grid
    n = grid.lo.size
    tgt = _as_point(target, n)
    cell = np.floor((tgt - grid.lo) / grid.h).astype(np.int64)
    dims = grid.occ.shape
    if np.any(cell < 0) or np.any(cell >= np.asarray(dims)):
        raise UnreachableError("target lies outside the computed window")
    strides = np.array([int(np.prod(dims[d + 1:])) for d in range(n)], dtype=np.int64)
    arr = result.arrival.ravel()
    par = result.parent.ravel()
    cur = int(cell @ strides)
    if arr[cur] < 0:
        raise UnreachableError("target cell was never reached")
    times = result.step_times

    def center(flat):
        m = np.unravel_index(flat, dims)
        return grid.lo + (np.asarray(m, dtype=float) + 0.5) * grid.h

    knots = [(float(times[arr[cur]]), center(cur))]
    while par[cur] >= 0:
        ka = int(arr[cur])
        p = int(par[cur])
        knots.append((float(times[ka - 1]), center(p)))
        if arr[p] < ka - 1:
            knots.append((float(times[arr[p]]), center(p)))
        cur = p
    knots.reverse()
    return knots
