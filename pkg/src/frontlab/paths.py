"""Admissible paths: validation, extremal flows, and realizing constructions.

A path is admissible for the dynamics ``|gamma' - b| <= a(gamma, t)`` when the
speed bound holds along every segment.  Paths here are piecewise linear in
time; waiting is encoded by consecutive knots sharing a point.
"""

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import (
    InvalidPathError,
    InvalidSpecError,
    NotInHullError,
    RealizationFailedError,
)
from .geometry import Polytope, caratheodory_decompose
from .reachable import extract_discrete_path, reach

__all__ = [
    "AdmissiblePath",
    "validate_path",
    "bridge",
    "extremal_trajectory",
    "rotation_number",
    "construct_realizing_path",
    "RealizingPathReport",
]


@dataclass
class AdmissiblePath:
    """Piecewise-linear path given by knots (time, point)."""

    times: np.ndarray
    points: np.ndarray

    @classmethod
    def from_knots(cls, knots: List[Tuple[float, np.ndarray]]) -> "AdmissiblePath":
        times = np.array([float(t) for t, _ in knots])
        points = np.array([np.atleast_1d(np.asarray(p, dtype=float)) for _, p in knots])
        return cls(times=times, points=points)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.shape[0] != self.times.size or self.times.size < 2:
            raise InvalidPathError("need at least two knots with matching times")
        dts = np.diff(self.times)
        if np.any(dts < 0):
            raise InvalidPathError("knot times must be non-decreasing")
        moved = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        if np.any((dts == 0) & (moved > 0)):
            raise InvalidPathError("zero-duration segment with nonzero displacement")

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def t0(self) -> float:
        return float(self.times[0])

    @property
    def t1(self) -> float:
        return float(self.times[-1])

    def position(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.empty((t.size, self.dim))
        for k, tv in enumerate(t):
            tv = min(max(tv, self.times[0]), self.times[-1])
            j = int(np.searchsorted(self.times, tv, side="right") - 1)
            j = min(j, self.times.size - 2)
            dt = self.times[j + 1] - self.times[j]
            lam = 0.0 if dt == 0 else (tv - self.times[j]) / dt
            out[k] = (1 - lam) * self.points[j] + lam * self.points[j + 1]
        return out if out.shape[0] > 1 else out[0]

    def shifted(self, dt: float, dx=None) -> "AdmissiblePath":
        pts = self.points if dx is None else self.points + np.asarray(dx, dtype=float)
        return AdmissiblePath(times=self.times + dt, points=pts)

    def concat(self, other: "AdmissiblePath") -> "AdmissiblePath":
        if abs(other.times[0] - self.times[-1]) > 1e-9:
            raise InvalidPathError("paths to concatenate must meet in time")
        if np.linalg.norm(other.points[0] - self.points[-1]) > 1e-9:
            raise InvalidPathError("paths to concatenate must meet in space")
        return AdmissiblePath(times=np.concatenate([self.times, other.times[1:]]),
                              points=np.concatenate([self.points, other.points[1:]]))

    def to_csv(self, path) -> None:
        with open(path, "w") as f:
            f.write(",".join(["t"] + [f"x{d + 1}" for d in range(self.dim)]) + "\n")
            for t, p in zip(self.times, self.points):
                f.write(",".join([f"{t:.17g}"] + [f"{c:.17g}" for c in p]) + "\n")

    @classmethod
    def from_csv(cls, path) -> "AdmissiblePath":
        rows = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(times=rows[:, 0], points=rows[:, 1:])


def validate_path(env, path: AdmissiblePath, samples_per_segment: int = 9) -> dict:
    """Worst sampled ratio of segment speed to the admissible bound.

    For each linear segment with velocity v the ratio ``|v - b| / a(x, t)``
    is evaluated at evenly spaced sample points (endpoints included).  A
    report with ``worst_ratio <= 1 + tol`` certifies admissibility up to the
    sampling and time-freezing tolerance of the producer.
    """
    if path.dim != env.dim:
        raise InvalidPathError("path dimension does not match the environment")
    worst = 0.0
    argworst = (0.0, None)
    n_samples = 0
    for j in range(path.times.size - 1):
        dt = path.times[j + 1] - path.times[j]
        if dt == 0:
            continue
        v = (path.points[j + 1] - path.points[j]) / dt
        taus = np.linspace(path.times[j], path.times[j + 1], samples_per_segment)
        lam = (taus - path.times[j]) / dt
        xs = path.points[j][None, :] * (1 - lam[:, None]) + path.points[j + 1][None, :] * lam[:, None]
        if env.has_drift:
            b = np.asarray(env.drift(xs, taus[0]), dtype=float)
        else:
            b = np.zeros_like(xs)
        speeds = np.asarray(env.speed(xs, taus), dtype=float)
        ratios = np.linalg.norm(v[None, :] - b, axis=1) / speeds
        n_samples += taus.size
        jmax = int(np.argmax(ratios))
        if ratios[jmax] > worst:
            worst = float(ratios[jmax])
            argworst = (float(taus[jmax]), xs[jmax].copy())
    return {
        "worst_ratio": worst,
        "n_segments": int(path.times.size - 1),
        "n_samples": int(n_samples),
        "worst_time": argworst[0],
        "worst_point": None if argworst[1] is None else argworst[1].tolist(),
    }


def bridge(env, x, y, t0: float) -> AdmissiblePath:
    """Connect x to y inside an integer-length window, then wait.

    Travels in a straight line at the worst-case admissible speed (the lower
    bound alpha, corrected for drift), then waits at y until the next integer
    duration has elapsed.  Always admissible since the true speed field is at
    least alpha everywhere.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    e = y - x
    dist = float(np.linalg.norm(e))
    if env.has_drift:
        b = np.asarray(env.drift(x, t0), dtype=float).reshape(-1)
    else:
        b = np.zeros_like(x)
    a0 = env.alpha
    if dist == 0.0:
        return AdmissiblePath(times=np.array([t0, t0 + 1.0]), points=np.stack([x, y]))
    b2 = float(b @ b)
    eb = float(e @ b)
    # positive root of |e - b*tau| = a0*tau
    tau = (-eb + math.sqrt(eb * eb + (a0 * a0 - b2) * dist * dist)) / (a0 * a0 - b2)
    ell = max(1, int(math.ceil(tau - 1e-12)))
    knots_t = [t0, t0 + tau]
    knots_p = [x, y]
    if tau < ell:
        knots_t.append(t0 + ell)
        knots_p.append(y)
    return AdmissiblePath(times=np.array(knots_t), points=np.stack(knots_p))


def extremal_trajectory(env, x0: float, s: float, t: float, side: str = "right",
                        n_steps: Optional[int] = None):
    """Integrate the one-dimensional extremal flow dx/dt = b +/- a(x, t).

    Classic fixed-step RK4; returns (times, positions).  The right extremal
    traces the upper reachable endpoint, the left one the lower endpoint.
    """
    if env.dim != 1:
        raise InvalidSpecError("extremal trajectories are one-dimensional")
    sign = {"right": 1.0, "left": -1.0}.get(side)
    if sign is None:
        raise InvalidSpecError("side must be 'right' or 'left'")
    if n_steps is None:
        n_steps = max(256, int(64 * (t - s)))
    if env.has_drift:
        b = float(np.asarray(env.drift(np.zeros(1), s)).ravel()[0])
    else:
        b = 0.0

    def f(x, tau):
        return b + sign * float(np.asarray(env.speed(np.array([x]), tau)).ravel()[0])

    times = np.linspace(s, t, n_steps + 1)
    xs = np.empty(n_steps + 1)
    xs[0] = x0
    hstep = (t - s) / n_steps
    for i in range(n_steps):
        ti, xi = times[i], xs[i]
        k1 = f(xi, ti)
        k2 = f(xi + 0.5 * hstep * k1, ti + 0.5 * hstep)
        k3 = f(xi + 0.5 * hstep * k2, ti + 0.5 * hstep)
        k4 = f(xi + hstep * k3, ti + hstep)
        xs[i + 1] = xi + (hstep / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return times, xs


def rotation_number(env, x0: float = 0.0, horizon: float = 100.0,
                    side: str = "right", n_steps: Optional[int] = None) -> float:
    """Long-run mean velocity of an extremal trajectory, (x(T) - x0) / T."""
    times, xs = extremal_trajectory(env, x0, 0.0, horizon, side=side, n_steps=n_steps)
    return float((xs[-1] - x0) / (times[-1] - times[0]))


@dataclass
class RealizingPathReport:
    """Construction record for a realizing path."""

    path: AdmissiblePath
    target_velocity: np.ndarray
    achieved_velocity: np.ndarray
    duration: float
    vertices: np.ndarray
    weights: np.ndarray
    rational_weights: np.ndarray
    denominator: int
    block_count: int
    segment_misses: List[float] = field(default_factory=list)

    @property
    def velocity_error(self) -> float:
        return float(np.linalg.norm(self.achieved_velocity - self.target_velocity))


def _rationalize(weights: np.ndarray, q_max: int) -> Tuple[np.ndarray, int]:
    """Best small-denominator approximation p/q of a probability vector."""
    best = None
    for q in range(1, q_max + 1):
        p = np.round(weights * q).astype(int)
        p = np.maximum(p, 0)
        gap = q - p.sum()
        if gap != 0:
            # push the correction onto the entries with the largest rounding slack
            resid = weights * q - p
            order = np.argsort(-resid if gap > 0 else resid)
            for i in order[:abs(gap)]:
                p[i] += 1 if gap > 0 else -1
        if np.any(p < 0) or p.sum() != q:
            continue
        err = np.max(np.abs(weights - p / q))
        if best is None or err < best[0] - 1e-15:
            best = (err, p.copy(), q)
        if best[0] <= 1e-12:
            break
    if best is None:
        raise RealizationFailedError("no valid rational weight approximation found")
    return best[1], best[2]


def _strict_segment(env, z, duration: float, target, h: float, dt: float):
    """Strict front over [0, duration]; path to the nearest reached cell."""
    res = reach(env, z, 0.0, duration, h=h, dt=dt, mode="strict")
    pts = res.grid.occupied_points()
    tgt = np.atleast_1d(np.asarray(target, dtype=float))
    d = np.linalg.norm(pts - tgt[None, :], axis=1)
    j = int(np.argmin(d))
    knots = extract_discrete_path(res, pts[j])
    miss = float(d[j])
    if knots[-1][0] < duration - 1e-9:
        knots.append((duration, knots[-1][1]))
    return AdmissiblePath.from_knots(knots), miss, res.claimed_tol


def construct_realizing_path(env, shape: Polytope, w, k: float, h: float,
                             dt: Optional[float] = None, q_max: int = 64,
                             x0=None) -> RealizingPathReport:
    """Build an admissible path whose mean velocity over [0, k] is close to w.

    The target velocity is decomposed over the vertices of ``shape`` (a
    convex-hull estimate of the attainable mean velocities), the weights are
    approximated by rationals p/q, and time is split into blocks of length q.
    Inside each block the path chases each vertex velocity for its integer
    share of time using strict-mode fronts, chaining segments at the actually
    reached cells; integer block boundaries let the field statistics repeat,
    so windows stay bounded.  Waiting absorbs early arrivals.

    The per-segment cell misses accumulate into the achieved-velocity error,
    reported in the result; extreme targets (w on the boundary of the true
    shape) fail with RealizationFailedError rather than returning an
    inadmissible path.
    """
    n = env.dim
    w = np.atleast_1d(np.asarray(w, dtype=float))
    if w.shape != (n,):
        raise InvalidSpecError("target velocity has the wrong dimension")
    if x0 is None:
        x0 = np.zeros(n)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if dt is None:
        dt = 16.0 * math.sqrt(n) * h / env.alpha
    if k <= 0:
        raise InvalidSpecError("horizon k must be positive")

    try:
        combo = caratheodory_decompose(shape, w)
    except NotInHullError as exc:
        raise RealizationFailedError(
            f"velocity {w} lies outside the estimated shape") from exc
    verts = np.array([v for v, _ in combo])
    lam = np.array([wt for _, wt in combo])
    p, q = _rationalize(lam, q_max)
    keep = p > 0
    verts_used = verts[keep]
    p_used = p[keep]

    n_blocks = int(math.floor(k / q + 1e-12))
    remainder = k - n_blocks * q

    segments = []
    misses = []
    z = x0.copy()
    t_abs = 0.0
    for _ in range(n_blocks):
        for v, pi in zip(verts_used, p_used):
            envk = env.shift_time(int(round(t_abs))) if float(t_abs).is_integer() else None
            if envk is None:
                raise RealizationFailedError("block boundaries drifted off integers")
            target = z + pi * v
            seg, miss, _tol = _strict_segment(envk, z, float(pi), target, h, dt)
            segments.append(seg.shifted(t_abs))
            misses.append(miss)
            z = seg.points[-1].copy()
            t_abs += float(pi)
    if remainder > 1e-9:
        envk = env.shift_time(int(round(t_abs)))
        want = x0 + k * w
        gap = want - z
        glen = float(np.linalg.norm(gap))
        safe = 0.8 * env.alpha * remainder
        target = z + gap * min(1.0, safe / glen) if glen > 0 else z.copy()
        seg, miss, _tol = _strict_segment(envk, z, float(remainder), target, h, dt)
        segments.append(seg.shifted(t_abs))
        misses.append(miss)
        z = seg.points[-1].copy()
        t_abs += remainder

    if not segments:
        raise RealizationFailedError("horizon too short to schedule any block")
    full = segments[0]
    for seg in segments[1:]:
        full = full.concat(seg)
    achieved = (z - x0) / k
    return RealizingPathReport(
        path=full,
        target_velocity=w,
        achieved_velocity=achieved,
        duration=float(k),
        vertices=verts_used,
        weights=lam[keep],
        rational_weights=p_used / q,
        denominator=int(q),
        block_count=n_blocks,
        segment_misses=misses,
    )
