"""Long-horizon averaging: limit-shape estimates and their consistency checks.

Scaled reachable sets ``R_m([0,1]^n) / m`` settle down as m grows; their
convex hulls give a computable estimate of the limiting velocity shape.  The
estimators here run a single long front propagation and harvest snapshots,
then offer two independent consistency probes: an approximate subadditivity
inclusion between horizons, and uniform convergence of scaled endpoint drift
across starting points (one dimension).
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import InvalidSpecError
from .geometry import (
    Polytope,
    convex_hull,
    hausdorff,
    hausdorff_directed,
    minkowski_sum,
    rasterize_box,
)
from .reachable import FrontStepper, reach_enlarged

__all__ = [
    "LimitShapeEstimate",
    "estimate_limit_shape",
    "check_subadditivity",
    "uniform_convergence_report",
]


@dataclass
class LimitShapeEstimate:
    """Scaled-hull history and the final limit-shape polytope."""

    horizons: List[float]
    scaled_hulls: List[Polytope]
    shape: Polytope
    h: float
    dt: float
    env_fingerprint: str
    increments: List[float] = field(default_factory=list)

    def cauchy_rate(self) -> float:
        """Largest m * delta(W_m, W_final) over recorded horizons.

        The scaled hulls carry an O(1/m) seed-size bias, so this product
        staying bounded is the expected convergence signature.
        """
        if not self.increments:
            return 0.0
        return max(m * d for m, d in zip(self.horizons, self.increments))


def estimate_limit_shape(env, m_max: float, h: float,
                         dt: Optional[float] = None,
                         schedule: Optional[Sequence[float]] = None,
                         window: Optional[Tuple] = None) -> LimitShapeEstimate:
    """Estimate the limiting velocity shape from one long front run.

    Starts from the unit box (the enlarged seed keeps integer-lattice
    stationarity usable), records convex hulls at the scheduled horizons, and
    scales each by 1/m.  The final entry is the shape estimate; the recorded
    Hausdorff gaps to it quantify convergence.
    """
    if m_max <= 0:
        raise InvalidSpecError("m_max must be positive")
    if schedule is None:
        schedule = sorted({max(1.0, round(m_max * f)) for f in
                           (0.1, 0.2, 0.35, 0.5, 0.7, 0.85)})
    schedule = [float(m) for m in schedule if 0 < m < m_max]
    res = reach_enlarged(env, 0.0, float(m_max), h=h, dt=dt, window=window,
                         snapshot_times=schedule,
                         snapshot_fn=lambda g: convex_hull(g))
    final_hull = convex_hull(res.grid)
    horizons = [m for m, _ in res.snapshots] + [float(m_max)]
    hulls = [p.scaled(1.0 / m) for m, p in res.snapshots]
    hulls.append(final_hull.scaled(1.0 / float(m_max)))
    shape = hulls[-1]
    increments = [hausdorff(w, shape) for w in hulls[:-1]] + [0.0]
    return LimitShapeEstimate(
        horizons=horizons, scaled_hulls=hulls, shape=shape, h=h,
        dt=res.dt, env_fingerprint=env.fingerprint(), increments=increments)


def check_subadditivity(env, m: int, k: int, h: float,
                        dt: Optional[float] = None) -> dict:
    """Test the chaining inclusion behind the averaging argument.

    With Y the unit box, stationarity gives

        R_{m+k}(Y, 0)  is contained in  R_m(Y, 0) + R_k(Y, m) + (-Y),

    where + is the Minkowski sum: any point reached at time m lies in some
    integer cell z + Y, from which the shifted field repeats.  All three sets
    are computed as grid inner approximations, so the reported excess (how
    far the left side pokes out of the right side) should be on the order of
    the grid slack, not of the set diameters.
    """
    if m <= 0 or k <= 0 or int(m) != m or int(k) != k:
        raise InvalidSpecError("m and k must be positive integers")
    left = reach_enlarged(env, 0.0, float(m + k), h=h, dt=dt).grid
    first = reach_enlarged(env, 0.0, float(m), h=h, dt=dt).grid
    second = reach_enlarged(env.shift_time(int(m)), 0.0, float(k), h=h, dt=dt).grid

    pad = 2.0 * h
    n = env.dim
    neg_y = rasterize_box(-np.ones(n) - pad, np.zeros(n) + pad, h,
                          -np.ones(n) - 4 * h, np.ones(n) * 0.0 + 4 * h)
    right = minkowski_sum(minkowski_sum(first, second), neg_y)
    excess = hausdorff_directed(left, right)
    return {
        "m": int(m),
        "k": int(k),
        "h": h,
        "excess": float(excess),
        "left_count": int(left.count),
        "right_count": int(right.count),
    }


def uniform_convergence_report(env, starts: Sequence[float],
                               horizons: Sequence[float], h: float,
                               dt: Optional[float] = None,
                               reference: Optional[Tuple[float, float]] = None) -> dict:
    """Scaled endpoint drift across many starts, one dimension.

    For each start x and horizon T the reachable interval endpoints are
    rescaled to velocities (l - x) / T and (r - x) / T and compared against
    the reference velocity interval.  The returned deviations should shrink
    like 1/T uniformly in x; their supremum over starts is the quantity the
    averaging theory controls.
    """
    if env.dim != 1:
        raise InvalidSpecError("uniform convergence report is one-dimensional")
    horizons = sorted(float(t) for t in horizons)
    if not horizons or horizons[0] <= 0:
        raise InvalidSpecError("horizons must be positive")
    per_t = {t: [] for t in horizons}
    for x in starts:
        stepper = FrontStepper(env, np.array([float(x)]), s=0.0,
                               t_end=horizons[-1], h=h, dt=dt)
        for t in horizons:
            stepper.advance_to(t)
            lft, rgt = _endpoints_from_stepper(stepper)
            per_t[t].append(((lft - x) / t, (rgt - x) / t))
    out = {"starts": [float(x) for x in starts], "horizons": horizons,
           "scaled_intervals": {str(t): per_t[t] for t in horizons}}
    if reference is not None:
        wl, wr = float(reference[0]), float(reference[1])
        sup_dev = {}
        for t in horizons:
            devs = [max(abs(l - wl), abs(r - wr)) for l, r in per_t[t]]
            sup_dev[str(t)] = float(max(devs))
        out["reference"] = [wl, wr]
        out["sup_deviation"] = sup_dev
    return out


def _endpoints_from_stepper(stepper: FrontStepper) -> Tuple[float, float]:
    from .reachable import NEG_CUT

    s = stepper.sfield
    fin = s > NEG_CUT
    idx = np.nonzero(fin)[0]
    pos = stepper.lo[0] + (idx + 0.5) * stepper.h
    sv = s[idx]
    return float(np.min(pos - sv)), float(np.max(pos + sv))
