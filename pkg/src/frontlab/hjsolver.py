"""Front-equation solvers: oscillatory finite differences and control formulas.

Three ways to evaluate the level-set equation

    u_t + b . Du + a(x, t) |Du| = 0,    u(., 0) = u0,

whose sublevel sets are the reachable sets of ``|gamma' - b| <= a``:

* an explicit monotone finite-difference scheme (Osher-Sethian upwinding
  with drift upwinded separately), for oscillatory speed fields a(x / eps);
* the exact control representation ``u(x, t) = min u0`` over the backward
  reachable set, computed by running the front engine in the time-reversed
  field; and
* a clock embedding for the variant with one noncoercive direction, which
  reduces to the control formula with a shifted clock and shifted data.
"""

from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .environment import TimeReversedField
from .exceptions import (
    CflViolationError,
    InvalidSpecError,
    NumericBlowupError,
)
from .fields import ScalarField
from .reachable import reach

__all__ = [
    "SolverConfig",
    "EpsScaledField",
    "solve_oscillatory_fd",
    "solve_by_control",
    "solve_noncoercive",
]


@dataclass
class SolverConfig:
    """Grid and clock for the finite-difference solver.

    The window should overshoot the region of interest by at least
    ``(beta + |b|) * t_end`` on every side: boundary values are extended by
    replication, and the contaminated band grows inward at the maximal speed.
    """

    lo: np.ndarray
    hi: np.ndarray
    h: float
    t_end: float
    dt: Optional[float] = None
    report_times: Sequence[float] = dc_field(default_factory=list)
    safety: float = 0.9

    def __post_init__(self):
        self.lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        self.hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if np.any(self.hi <= self.lo):
            raise InvalidSpecError("solver window needs hi > lo")
        if self.t_end <= 0:
            raise InvalidSpecError("t_end must be positive")


class EpsScaledField:
    """Speed field sampled at (x / eps, t / eps): the oscillatory regime.

    Drift is left untouched; only the modulated speed oscillates.  Lipschitz
    constants scale accordingly, so the reach engine remains usable on this
    wrapper, just with proportionally finer grids.
    """

    def __init__(self, env, eps: float):
        if eps <= 0:
            raise InvalidSpecError("eps must be positive")
        self._env = env
        self.eps = float(eps)

    @property
    def dim(self):
        return self._env.dim

    @property
    def alpha(self):
        return self._env.alpha

    @property
    def beta(self):
        return self._env.beta

    @property
    def autonomous(self):
        return self._env.autonomous

    @property
    def sup_drift(self):
        return self._env.sup_drift

    @property
    def has_drift(self):
        return self._env.has_drift

    def lipschitz_x(self):
        return self._env.lipschitz_x() / self.eps

    def lipschitz_t(self):
        return self._env.lipschitz_t() / self.eps

    def speed(self, x, t):
        return self._env.speed(np.asarray(x, dtype=float) / self.eps,
                               np.asarray(t, dtype=float) / self.eps)

    def drift(self, x, t):
        return self._env.drift(x, np.asarray(t, dtype=float) / self.eps)

    def fingerprint(self):
        return f"eps{self.eps!r}:{self._env.fingerprint()}"


def _upwind_gradients(u: np.ndarray, h: float):
    """One-sided differences with replicated boundary values."""
    n = u.ndim
    dm = []
    dp = []
    for d in range(n):
        pw = [(0, 0)] * n
        pw[d] = (1, 1)
        up = np.pad(u, pw, mode="edge")
        sl_lo = [slice(None)] * n
        sl_hi = [slice(None)] * n
        sl_lo[d] = slice(0, -2)
        sl_hi[d] = slice(2, None)
        dm.append((u - up[tuple(sl_lo)]) / h)
        dp.append((up[tuple(sl_hi)] - u) / h)
    return dm, dp


def solve_oscillatory_fd(env, u0: Callable[[np.ndarray], np.ndarray],
                         config: SolverConfig) -> ScalarField:
    """Explicit monotone finite differences for the level-set equation.

    The Hamiltonian ``b . p + a |p|`` is discretized with the Osher-Sethian
    upwind gradient for the coercive part and simple directional upwinding
    for the drift.  Stability needs dt <= safety * h / (n * (beta + |b|));
    passing a larger dt raises CflViolationError, and runaway values raise
    NumericBlowupError instead of silently returning garbage.
    """
    n = env.dim
    h = config.h
    dims = np.ceil((config.hi - config.lo) / h).astype(int)
    axes = [config.lo[d] + (np.arange(dims[d]) + 0.5) * h for d in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)

    sup_b = float(env.sup_drift)
    cfl = config.safety * h / (n * (env.beta + sup_b))
    dt = cfl if config.dt is None else float(config.dt)
    if dt > cfl * (1.0 + 1e-9):
        raise CflViolationError(
            f"dt={dt:g} exceeds the stability bound {cfl:g} for h={h:g}")

    if env.has_drift:
        b = np.asarray(env.drift(np.zeros(n), 0.0), dtype=float).reshape(n)
    else:
        b = np.zeros(n)

    u = np.asarray(u0(pts), dtype=float).reshape(tuple(int(d) for d in dims))
    report = sorted(float(t) for t in (config.report_times or [config.t_end]))
    if report[-1] > config.t_end + 1e-12:
        raise InvalidSpecError("report times beyond t_end")

    frames = []
    t = 0.0
    for t_next in report:
        while t < t_next - 1e-12:
            step = min(dt, t_next - t)
            a = np.asarray(env.speed(pts, t), dtype=float).reshape(u.shape)
            dm, dp = _upwind_gradients(u, h)
            grad2 = np.zeros_like(u)
            adv = np.zeros_like(u)
            for d in range(n):
                grad2 += np.maximum(dm[d], 0.0) ** 2 + np.minimum(dp[d], 0.0) ** 2
                if b[d] > 0:
                    adv += b[d] * dm[d]
                elif b[d] < 0:
                    adv += b[d] * dp[d]
            u = u - step * (a * np.sqrt(grad2) + adv)
            t += step
            if not np.all(np.isfinite(u)) or np.max(np.abs(u)) > 1e12:
                raise NumericBlowupError(f"finite-difference values blew up at t={t:g}")
        frames.append(u.copy())
        t = t_next
    return ScalarField(lo=config.lo, h=h, values=np.stack(frames),
                       times=np.asarray(report))


def solve_by_control(env, u0: Callable[[np.ndarray], np.ndarray], points,
                     t: float, h: float, dt: Optional[float] = None,
                     window: Optional[Tuple] = None,
                     s: float = 0.0) -> np.ndarray:
    """Control representation: u(x, t) = min of u0 over the backward set.

    The backward reachable set from x is the forward reachable set of the
    time-reversed field (speed clock flipped, drift negated), so each
    evaluation point costs one front run.  Accuracy is O(h) times the
    Lipschitz constant of u0.

    ``s`` shifts the control window to [s, s + t]: the data is still read
    at the start of the window, but the medium runs over the shifted span.
    Non-integer values are fine; the engine does not rely on stationarity.
    """
    if t < 0:
        raise InvalidSpecError("control representation needs t >= 0")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if t == 0:
        return np.asarray(u0(pts), dtype=float).reshape(pts.shape[0])
    rev = TimeReversedField(env, t_end=float(s) + t)
    out = np.empty(pts.shape[0])
    for i, x in enumerate(pts):
        res = reach(rev, x, 0.0, t, h=h, dt=dt, window=window)
        ys = res.grid.occupied_points()
        out[i] = float(np.min(np.asarray(u0(ys), dtype=float)))
    return out


def solve_noncoercive(env, v0: Callable[[np.ndarray], np.ndarray], lo, hi,
                      h_out: float, times: Sequence[float], h: float,
                      dt: Optional[float] = None) -> ScalarField:
    """Degenerate transport direction handled by a clock embedding.

    The state is (x, z) where z is an extra coordinate that moves with unit
    velocity and carries no speed of its own: the Hamiltonian b.p + a|p_x|
    + p_z is noncoercive in p_z, so the front engine cannot run in the full
    (n+1)-dimensional state space.  The cure is to treat z as the clock of
    the n-dimensional problem: characteristics reaching (x, z) at time t
    departed from level z - t, and along the way the speed field is read at
    clock z - t + tau.  Hence

        v(x, z, t) = min v0(y, z - t)  over the backward set of x,

    where the backward set is computed in the field started at clock z - t.
    env's time argument plays the role of z, so an env that is autonomous
    collapses to the plain control formula with shifted data.

    v0 takes (m, n+1) arrays; lo and hi bound the output box over (x, z),
    discretized at pitch h_out, while h and dt drive the front engine.
    """
    n = env.dim
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    if lo.shape != (n + 1,) or hi.shape != (n + 1,):
        raise InvalidSpecError("output box must cover (x, z): dim + 1 axes")
    if np.any(hi <= lo):
        raise InvalidSpecError("output box needs hi > lo")
    dims = np.maximum(np.ceil((hi - lo) / h_out - 1e-9).astype(int), 1)
    axes = [lo[d] + (np.arange(dims[d]) + 0.5) * h_out for d in range(n + 1)]
    mesh = np.meshgrid(*axes[:n], indexing="ij")
    xpts = np.stack([m.ravel() for m in mesh], axis=1)

    report = sorted(float(t) for t in times)
    frames = []
    for t in report:
        vals = np.empty(tuple(int(d) for d in dims))
        for iz, z in enumerate(axes[-1]):
            start_clock = z - t
            full = np.concatenate(
                [xpts, np.full((xpts.shape[0], 1), start_clock)], axis=1)
            if t <= 0:
                row = np.asarray(v0(full), dtype=float)
            else:
                def data(y, _clock=start_clock):
                    y = np.atleast_2d(np.asarray(y, dtype=float))
                    col = np.full((y.shape[0], 1), _clock)
                    return np.asarray(v0(np.concatenate([y, col], axis=1)))

                row = solve_by_control(env, data, xpts, t, h=h, dt=dt,
                                       s=start_clock)
            vals[..., iz] = row.reshape(vals.shape[:-1])
        frames.append(vals)
    return ScalarField(lo=lo, h=h_out, values=np.stack(frames),
                       times=np.asarray(report))
