"""Experiment harness: INI configs in, deterministic JSON reports out.

A config file describes one environment plus the parameters of one
experiment kind.  Reports are JSON with sorted keys; every float is written
in Python's shortest round-trip form, so a report is byte-reproducible from
the same config (the wall-time entry is added after hashing and is the one
field allowed to differ between runs).
"""

import configparser
import hashlib
import json
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .averaging import check_subadditivity, estimate_limit_shape
from .effective import EffectiveModel, solve_homogenized
from .environment import Environment, EnvironmentSpec, build_environment, spec_from_mapping
from .exceptions import InvalidSpecError
from .geometry import convex_hull
from .hjsolver import solve_by_control, solve_noncoercive
from .paths import rotation_number
from .reachable import reach

__all__ = ["ExperimentConfig", "load_config", "run_experiment", "emit_report", "KINDS"]

KINDS = ("reach", "average", "rotation", "homogenize", "drift", "noncoercive")


@dataclass
class ExperimentConfig:
    kind: str
    spec: EnvironmentSpec
    params: dict
    canonical: str

    def sha(self) -> str:
        return hashlib.sha256(self.canonical.encode()).hexdigest()


def _floats(text: str):
    return [float(v) for v in text.replace(",", " ").split()]


def load_config(path, kind: Optional[str] = None,
                seed_override: Optional[int] = None) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    read = parser.read(str(path))
    if not read:
        raise InvalidSpecError(f"config file {path} not found or unreadable")
    if "environment" not in parser:
        raise InvalidSpecError("config needs an [environment] section")
    present = [k for k in KINDS if k in parser]
    if kind is None:
        if len(present) != 1:
            raise InvalidSpecError(
                f"config must contain exactly one experiment section, found {present}")
        kind = present[0]
    elif kind not in parser:
        raise InvalidSpecError(f"config has no [{kind}] section")
    spec = spec_from_mapping(parser["environment"])
    if seed_override is not None:
        spec = replace(spec, seed=int(seed_override))
    params = dict(parser[kind])
    lines = [f"kind={kind}"]
    lines += [f"environment.{k}={v}" for k, v in sorted(parser["environment"].items())]
    if seed_override is not None:
        lines.append(f"environment.seed={int(seed_override)}")
    lines += [f"{kind}.{k}={v}" for k, v in sorted(params.items())]
    return ExperimentConfig(kind=kind, spec=spec, params=params,
                            canonical="\n".join(lines))


def _parse_common(p: dict):
    h = float(p.get("h", 1.0 / 64))
    dt = float(p["dt"]) if p.get("dt") else None
    return h, dt


def _endpoint_block(res):
    lft, rgt = res.endpoints()
    return {"left": lft, "right": rgt}


def _run_reach(env: Environment, p: dict) -> dict:
    h, dt = _parse_common(p)
    start = np.array(_floats(p.get("start", " ".join(["0"] * env.dim))))
    s = float(p.get("s", 0.0))
    t = float(p["t"])
    mode = p.get("mode", "surplus")
    snaps = _floats(p["snapshot_times"]) if p.get("snapshot_times") else None
    res = reach(env, start, s, t, h=h, dt=dt, mode=mode, snapshot_times=snaps)
    out = {
        "s": s, "t": t, "h": h, "dt": res.dt, "mode": mode,
        "cells": int(res.grid.count),
        "slack": res.slack,
    }
    if env.dim == 1 and mode == "surplus":
        out["endpoints"] = _endpoint_block(res)
    else:
        out["hull_vertices"] = convex_hull(res.grid).vertices.tolist()
    if snaps:
        out["snapshots"] = [
            {"t": tq, "cells": int(g.count),
             "hull_vertices": convex_hull(g).vertices.tolist()}
            for tq, g in res.snapshots
        ]
    return out


def _run_average(env: Environment, p: dict) -> dict:
    h, dt = _parse_common(p)
    m_max = float(p["m_max"])
    schedule = _floats(p["schedule"]) if p.get("schedule") else None
    est = estimate_limit_shape(env, m_max, h, dt=dt, schedule=schedule)
    out = {
        "m_max": m_max, "h": h, "dt": est.dt,
        "horizons": est.horizons,
        "increments": est.increments,
        "cauchy_rate": est.cauchy_rate(),
        "shape_vertices": est.shape.vertices.tolist(),
    }
    if p.get("subadditivity_m"):
        m = int(p["subadditivity_m"])
        k = int(p.get("subadditivity_k", m))
        out["subadditivity"] = check_subadditivity(env, m, k, h, dt=dt)
    return out


def _run_rotation(env: Environment, p: dict) -> dict:
    horizon = float(p.get("horizon", 100.0))
    x0 = float(p.get("x0", 0.0))
    n_steps = int(p["n_steps"]) if p.get("n_steps") else None
    rho_r = rotation_number(env, x0, horizon, side="right", n_steps=n_steps)
    rho_l = rotation_number(env, x0, horizon, side="left", n_steps=n_steps)
    out = {"horizon": horizon, "x0": x0,
           "rotation_right": rho_r, "rotation_left": rho_l}
    if p.get("crosscheck_h"):
        h = float(p["crosscheck_h"])
        res = reach(env, np.array([x0]), 0.0, horizon, h=h)
        lft, rgt = res.endpoints()
        out["crosscheck"] = {
            "h": h,
            "front_velocity_right": (rgt - x0) / horizon,
            "front_velocity_left": (lft - x0) / horizon,
        }
    return out


_U0_FORMS = {
    "linear": lambda c: (lambda y: y @ c),
    "cone": lambda c: (lambda y: np.linalg.norm(y, axis=1) - float(c[0])),
}


def _make_u0(p: dict):
    form = p.get("u0", "linear")
    coeffs = np.array(_floats(p.get("u0_coeffs", "1")))
    try:
        return _U0_FORMS[form](coeffs)
    except KeyError:
        raise InvalidSpecError(f"unknown u0 form {form!r}") from None


def _run_homogenize(env: Environment, p: dict) -> dict:
    if p.get("shape_lo") and p.get("shape_hi"):
        model = EffectiveModel.from_interval(float(p["shape_lo"]), float(p["shape_hi"]))
        shape_src = "given"
    else:
        h_shape, dt = _parse_common(p)
        m_max = float(p.get("m_max", 40))
        est = estimate_limit_shape(env, m_max, h_shape, dt=dt)
        model = EffectiveModel.from_estimate(est)
        shape_src = f"estimated(m_max={m_max})"
    u0 = _make_u0(p)
    lo = np.array(_floats(p.get("lo", "-2")))
    hi = np.array(_floats(p.get("hi", "2")))
    h_out = float(p.get("h_out", 1.0 / 8))
    times = _floats(p.get("times", "0.25 0.5 0.75 1.0"))
    tol = float(p["membership_tol"]) if p.get("membership_tol") else None
    fld = solve_homogenized(model, u0, lo, hi, h_out, times, membership_tol=tol)
    return {
        "shape_source": shape_src,
        "shape_vertices": model.shape.vertices.tolist(),
        "lo": lo.tolist(), "hi": hi.tolist(), "h_out": h_out,
        "times": times,
        "values": fld.values.tolist(),
    }


def _run_drift(env: Environment, p: dict) -> dict:
    if not env.has_drift:
        raise InvalidSpecError("drift experiment needs an environment with drift")
    h, dt = _parse_common(p)
    t = float(p.get("t", 5.0))
    start = np.array(_floats(p.get("start", " ".join(["0"] * env.dim))))
    res_d = reach(env, start, 0.0, t, h=h, dt=dt)
    spec0 = replace(env.spec, drift=None)
    env0 = build_environment(spec0)
    res_0 = reach(env0, start, 0.0, t, h=h, dt=dt)
    b = np.asarray(env.drift(np.zeros(env.dim), 0.0), dtype=float).reshape(env.dim)
    out = {"t": t, "h": h, "drift": b.tolist(), "expected_shift": (b * t).tolist()}
    if env.dim == 1:
        ld, rd = res_d.endpoints()
        l0, r0 = res_0.endpoints()
        out["measured_shift"] = [0.5 * ((ld + rd) - (l0 + r0))]
        out["endpoints_drifted"] = {"left": ld, "right": rd}
        out["endpoints_plain"] = {"left": l0, "right": r0}
    else:
        cd = res_d.grid.occupied_points().mean(axis=0)
        c0 = res_0.grid.occupied_points().mean(axis=0)
        out["measured_shift"] = (cd - c0).tolist()
    return out


def _run_noncoercive(env: Environment, p: dict) -> dict:
    h, dt = _parse_common(p)
    horizon = float(p.get("horizon", 1.0))
    n = env.dim
    lo = np.array(_floats(p.get("lo", " ".join(["-2"] * n) + " -1")))
    hi = np.array(_floats(p.get("hi", " ".join(["2"] * n) + " 1")))
    h_out = float(p.get("h_out", 0.25))

    def v0(q):
        q = np.atleast_2d(np.asarray(q, dtype=float))
        return np.linalg.norm(q[:, :n], axis=1) + 0.5 * q[:, n]

    fld = solve_noncoercive(env, v0, lo, hi, h_out, [horizon], h=h, dt=dt)
    body = {
        "horizon": horizon, "h": h, "h_out": h_out,
        "lo": lo.tolist(), "hi": hi.tolist(),
        "cells": int(np.prod(fld.values.shape[1:])),
        "min_value": float(fld.values.min()),
        "max_value": float(fld.values.max()),
    }
    if env.autonomous:
        # spot-check the clock embedding against the plain control formula
        idx = tuple(s // 2 for s in fld.values.shape[1:])
        pt = np.array([fld.lo[d] + (idx[d] + 0.5) * fld.h
                       for d in range(n + 1)])

        def data(y, _clock=pt[-1] - horizon):
            y = np.atleast_2d(np.asarray(y, dtype=float))
            col = np.full((y.shape[0], 1), _clock)
            return v0(np.concatenate([y, col], axis=1))

        direct = solve_by_control(env, data, pt[:n], horizon, h=h, dt=dt)
        body["reduction_gap"] = abs(float(fld.values[(0, *idx)])
                                    - float(direct[0]))
    return body


_RUNNERS = {
    "reach": _run_reach,
    "average": _run_average,
    "rotation": _run_rotation,
    "homogenize": _run_homogenize,
    "drift": _run_drift,
    "noncoercive": _run_noncoercive,
}


def run_experiment(cfg: ExperimentConfig) -> dict:
    env = build_environment(cfg.spec)
    t0 = time.perf_counter()
    body = _RUNNERS[cfg.kind](env, cfg.params)
    elapsed = time.perf_counter() - t0
    return {
        "kind": cfg.kind,
        "config_sha256": cfg.sha(),
        "env_fingerprint": env.fingerprint(),
        "version": __version__,
        "result": body,
        "wall_time_s": elapsed,
    }


def emit_report(report: dict, cfg: ExperimentConfig, out=None) -> Path:
    """Write the report as JSON; returns the path.

    ``out`` may be a directory (default ``reports/``) or a full .json path.
    The filename embeds the config hash, so distinct configs never collide.
    Everything except the wall_time_s entry is reproducible byte for byte:
    floats go through Python's shortest round-trip repr and keys are sorted.
    """
    if out is None:
        out = Path("reports")
    out = Path(out)
    if out.suffix == ".json":
        path = out
        path.parent.mkdir(parents=True, exist_ok=True)
    else:
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{cfg.kind}-{cfg.sha()[:12]}.json"
    with open(path, "w") as f:
        json.dump(report, f, sort_keys=True, indent=2)
        f.write("\n")
    return path
