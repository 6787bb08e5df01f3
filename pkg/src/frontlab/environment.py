"""Speed-field environments: periodic in space, periodic or random in time.

The propagation speed has the form

    a(x, t) = alpha + (beta - alpha) * (1 + m(x, t)) / 2

where the modulation ``m`` is a sum of at most eight trigonometric spatial
modes, each multiplied by a temporal coefficient, and is kept in [-1, 1] by
requiring the mode amplitudes to sum to at most one.  This makes the bounds
``alpha <= a <= beta`` exact by construction, not just empirical.

Temporal coefficients come in two kinds:

* ``periodic``: a closed-form period-1 modulation ``cos(2*pi*q*t + psi)``
  (integer frequency ``q``; ``q = 0`` means constant in time).
* ``random-time``: piecewise-linear interpolation of an i.i.d. uniform[-1, 1]
  sequence indexed by ``floor(t)``.  The sequence is produced by a
  counter-based hash keyed on ``(seed, mode, index)``, so shifting time by an
  integer is literally an index shift: the shifted field is another
  realization of the same stationary model, and the group identity
  ``a(x, t, shift_k(omega)) = a(x, t + k, omega)`` holds bitwise.

Modelling note: independence of the integer-indexed coefficients is the
simplest stationary ergodic law; nothing downstream depends on independence
beyond stationarity, so correlated streams could be swapped in behind the
same interface.

An optional constant drift ``b`` is supported, validated against the margin
``alpha - |b| >= eta > 0`` so the inclusion ``|gamma' - b| <= a`` always
admits motion in every direction.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import InvalidSpecError

MAX_MODES = 8

_TWO_PI = 2.0 * np.pi

# splitmix64 constants
_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(z):
    """splitmix64 finalizer; operates on uint64 scalars or arrays.

    Wraparound modulo 2**64 is the whole point, so overflow warnings are
    suppressed locally.
    """
    with np.errstate(over="ignore"):
        z = (z + _GAMMA).astype(np.uint64) if isinstance(z, np.ndarray) else np.uint64(z) + _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def _unit_coeff(seed, mode_index, k):
    """i.i.d. uniform[-1, 1] coefficient for (seed, mode, integer index k).

    ``k`` may be any integer (negative indices map through two's complement),
    scalar or array.  Pure function of its arguments: evaluation order never
    matters and no state is carried between calls.
    """
    k64 = np.asarray(k, dtype=np.int64).astype(np.uint64)
    with np.errstate(over="ignore"):
        h = _mix64(np.uint64(seed))
        h = _mix64(h ^ (np.uint64(mode_index + 1) * _M1))
        h = _mix64(h ^ k64)
    # top 53 bits -> [0,1) -> [-1,1)
    return (h >> np.uint64(11)).astype(np.float64) * (2.0 ** -53) * 2.0 - 1.0


@dataclass(frozen=True)
class Mode:
    """One trigonometric mode of the modulation.

    freq
        Integer spatial frequency vector (length = dimension).  Integrality is
        what makes the field Z^n-periodic.
    amplitude
        Nonnegative weight; amplitudes over all modes must sum to <= 1.
    phase
        Spatial phase offset in radians.
    tfreq
        Integer temporal frequency for the periodic kind (0 = constant in
        time).  Ignored for random-time environments.
    tphase
        Temporal phase in radians (periodic kind only).
    """

    freq: tuple
    amplitude: float
    phase: float = 0.0
    tfreq: int = 0
    tphase: float = 0.0


@dataclass(frozen=True)
class DriftSpec:
    """Constant drift vector plus its validated safety margin eta."""

    value: tuple
    eta: float


@dataclass(frozen=True)
class EnvironmentSpec:
    dim: int
    kind: str  # 'periodic' | 'random-time'
    alpha: float
    beta: float
    modes: tuple = ()
    drift: DriftSpec | None = None
    seed: int = 0

    def canonical_items(self):
        """Deterministic key/value pairs used for hashing and serialization."""
        items = [
            ("dim", str(self.dim)),
            ("kind", self.kind),
            ("alpha", repr(float(self.alpha))),
            ("beta", repr(float(self.beta))),
            ("seed", str(self.seed)),
            ("modes", _modes_to_text(self.modes)),
        ]
        if self.drift is not None:
            items.append(("drift", " ".join(repr(float(v)) for v in self.drift.value)))
            items.append(("eta", repr(float(self.drift.eta))))
        return items


def _modes_to_text(modes):
    parts = []
    for m in modes:
        freq = " ".join(str(int(f)) for f in m.freq)
        parts.append(
            f"{freq} | {m.amplitude!r} | {m.phase!r} | {int(m.tfreq)} | {m.tphase!r}"
        )
    return " ; ".join(parts)


def _modes_from_text(text, dim):
    modes = []
    text = text.strip()
    if not text:
        return ()
    for part in text.split(";"):
        fields = [f.strip() for f in part.split("|")]
        if len(fields) != 5:
            raise InvalidSpecError(f"bad mode entry: {part!r}")
        freq = tuple(int(tok) for tok in fields[0].split())
        if len(freq) != dim:
            raise InvalidSpecError(f"mode frequency length {len(freq)} != dim {dim}")
        modes.append(
            Mode(
                freq=freq,
                amplitude=float(fields[1]),
                phase=float(fields[2]),
                tfreq=int(fields[3]),
                tphase=float(fields[4]),
            )
        )
    return tuple(modes)


def validate_spec(spec: EnvironmentSpec) -> None:
    if spec.dim not in (1, 2, 3):
        raise InvalidSpecError(f"dim must be 1, 2, or 3, got {spec.dim}")
    if spec.kind not in ("periodic", "random-time"):
        raise InvalidSpecError(f"unknown kind {spec.kind!r}")
    if not (spec.alpha > 0):
        raise InvalidSpecError("alpha must be positive")
    if spec.beta < spec.alpha:
        raise InvalidSpecError("beta must be >= alpha")
    if len(spec.modes) > MAX_MODES:
        raise InvalidSpecError(f"at most {MAX_MODES} modes supported")
    amp_sum = 0.0
    for m in spec.modes:
        if len(m.freq) != spec.dim:
            raise InvalidSpecError("mode frequency length must equal dim")
        if any(int(f) != f for f in m.freq):
            raise InvalidSpecError("mode frequencies must be integers")
        if m.amplitude < 0:
            raise InvalidSpecError("mode amplitudes must be nonnegative")
        if int(m.tfreq) != m.tfreq:
            raise InvalidSpecError("temporal frequencies must be integers")
        amp_sum += m.amplitude
    if amp_sum > 1.0 + 1e-12:
        raise InvalidSpecError(
            f"mode amplitudes sum to {amp_sum}; must be <= 1 so bounds stay exact"
        )
    if spec.drift is not None:
        b = np.asarray(spec.drift.value, dtype=float)
        if b.shape != (spec.dim,):
            raise InvalidSpecError("drift vector length must equal dim")
        eta = float(spec.drift.eta)
        if not (eta > 0):
            raise InvalidSpecError("drift margin eta must be positive")
        if spec.alpha - float(np.linalg.norm(b)) < eta - 1e-12:
            raise InvalidSpecError(
                "drift too strong: alpha - |b| < eta violates the margin"
            )
    if not (0 <= spec.seed < 2 ** 64):
        raise InvalidSpecError("seed must fit in 64 bits")


class Environment:
    """A realized speed field together with its integer time shift ``k0``.

    Evaluation accepts point arrays of shape (..., dim) and broadcastable times.
    All evaluators are pure; shifting time returns a new object.
    """

    def __init__(self, spec: EnvironmentSpec, k0: int = 0):
        self.spec = spec
        self.k0 = int(k0)
        self._freqs = np.array([m.freq for m in spec.modes], dtype=float).reshape(
            len(spec.modes), spec.dim
        )
        self._amps = np.array([m.amplitude for m in spec.modes], dtype=float)
        self._phases = np.array([m.phase for m in spec.modes], dtype=float)
        self._tfreqs = np.array([m.tfreq for m in spec.modes], dtype=int)
        self._tphases = np.array([m.tphase for m in spec.modes], dtype=float)
        self._drift = (
            None if spec.drift is None else np.asarray(spec.drift.value, dtype=float)
        )

    # -- basic properties ---------------------------------------------------

    @property
    def dim(self):
        return self.spec.dim

    @property
    def alpha(self):
        return self.spec.alpha

    @property
    def beta(self):
        return self.spec.beta

    @property
    def autonomous(self):
        """True when the field has no time dependence at all."""
        if self.spec.kind == "random-time" and len(self.spec.modes) > 0:
            return False
        return all(m.tfreq == 0 for m in self.spec.modes)

    @property
    def sup_drift(self):
        return 0.0 if self._drift is None else float(np.linalg.norm(self._drift))

    @property
    def has_drift(self):
        return self._drift is not None

    def lipschitz_x(self):
        """Analytic bound on the spatial Lipschitz constant of the speed."""
        if len(self.spec.modes) == 0:
            return 0.0
        half = 0.5 * (self.spec.beta - self.spec.alpha)
        norms = np.linalg.norm(self._freqs, axis=1)
        return float(half * np.sum(self._amps * _TWO_PI * norms))

    def lipschitz_t(self):
        """Analytic bound on the temporal Lipschitz constant of the speed."""
        if len(self.spec.modes) == 0:
            return 0.0
        half = 0.5 * (self.spec.beta - self.spec.alpha)
        if self.spec.kind == "periodic":
            return float(half * np.sum(self._amps * _TWO_PI * np.abs(self._tfreqs)))
        # piecewise-linear interpolation of values in [-1,1]: slope <= 2
        return float(half * np.sum(self._amps * 2.0))

    # -- evaluation ----------------------------------------------------------

    def _temporal(self, t):
        """Temporal coefficients, shape (n_modes,) + t.shape."""
        t = np.asarray(t, dtype=float)
        out = np.empty((len(self.spec.modes),) + t.shape)
        if self.spec.kind == "periodic":
            for j in range(len(self.spec.modes)):
                q = self._tfreqs[j]
                if q == 0:
                    out[j] = 1.0
                else:
                    # reduce q*t mod 1 before the trig call so that integer
                    # time shifts reproduce bitwise-identical values
                    ph = np.mod(q * t, 1.0)
                    out[j] = np.cos(_TWO_PI * ph + self._tphases[j])
        else:
            k = np.floor(t)
            theta = t - k
            ki = k.astype(np.int64)
            for j in range(len(self.spec.modes)):
                left = _unit_coeff(self.spec.seed, j, ki)
                right = _unit_coeff(self.spec.seed, j, ki + 1)
                out[j] = left * (1.0 - theta) + right * theta
        return out

    def modulation(self, x, t):
        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            x = x.reshape(1)
        if x.shape[-1] != self.dim:
            raise InvalidSpecError(
                f"point dimension {x.shape[-1]} != environment dim {self.dim}"
            )
        t_eff = np.asarray(t, dtype=float) + self.k0
        base_shape = np.broadcast_shapes(x.shape[:-1], np.shape(t_eff))
        if len(self.spec.modes) == 0:
            return np.zeros(base_shape)
        # exact mod-1 reduction keeps the field bitwise Z^n-periodic
        dots = np.mod(x @ self._freqs.T, 1.0)  # (..., n_modes)
        spatial = np.cos(_TWO_PI * dots + self._phases)
        temporal = self._temporal(t_eff)  # (n_modes,) + t.shape
        m = np.zeros(base_shape)
        for j in range(len(self.spec.modes)):
            m = m + self._amps[j] * spatial[..., j] * temporal[j]
        return m

    def speed(self, x, t):
        """a(x, t + k0); guaranteed to lie in [alpha, beta]."""
        m = self.modulation(x, t)
        a = self.spec.alpha + 0.5 * (self.spec.beta - self.spec.alpha) * (1.0 + m)
        return a if a.shape else float(a)

    def drift(self, x, t):
        """Constant drift broadcast over the query points, or None."""
        if self._drift is None:
            return None
        x = np.asarray(x, dtype=float)
        shape = x.shape if x.ndim > 1 else (self.dim,)
        return np.broadcast_to(self._drift, shape).copy()

    # -- shifts and identity --------------------------------------------------

    def shift_time(self, k: int) -> "Environment":
        if int(k) != k:
            raise InvalidSpecError("time shifts must be integers")
        return Environment(self.spec, self.k0 + int(k))

    def fingerprint(self) -> str:
        payload = ";".join(f"{k}={v}" for k, v in self.spec.canonical_items())
        payload += f";k0={self.k0}"
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def __repr__(self):
        return (
            f"Environment(dim={self.dim}, kind={self.spec.kind!r}, "
            f"alpha={self.alpha}, beta={self.beta}, modes={len(self.spec.modes)}, "
            f"k0={self.k0})"
        )


class TimeReversedField:
    """View of an environment with time running backward from ``t_end``.

    Reverses drift sign as well: admissible curves of the reversed field are
    exactly the time reversals of admissible curves of the original, which is
    what turns backward reachability into a forward computation.
    Duck-typed to the parts of Environment that the reach engine uses.
    """

    def __init__(self, env, t_end):
        self._env = env
        self._t_end = float(t_end)

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
        return self._env.lipschitz_x()

    def lipschitz_t(self):
        return self._env.lipschitz_t()

    def speed(self, x, t):
        return self._env.speed(x, self._t_end - np.asarray(t, dtype=float))

    def drift(self, x, t):
        b = self._env.drift(x, self._t_end - np.asarray(t, dtype=float))
        return None if b is None else -b

    def fingerprint(self):
        return f"rev{self._t_end!r}:{self._env.fingerprint()}"


class FrozenTimeField:
    """Environment wrapper with a constant real time offset.

    Unlike ``shift_time`` the offset need not be an integer; used to express
    problems whose clock starts at a fractional instant.
    """

    def __init__(self, env, offset):
        self._env = env
        self._offset = float(offset)

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
        return self._env.lipschitz_x()

    def lipschitz_t(self):
        return self._env.lipschitz_t()

    def speed(self, x, t):
        return self._env.speed(x, np.asarray(t, dtype=float) + self._offset)

    def drift(self, x, t):
        return self._env.drift(x, np.asarray(t, dtype=float) + self._offset)

    def fingerprint(self):
        return f"ofs{self._offset!r}:{self._env.fingerprint()}"


# -- module-level operations (the public verbs) --------------------------------


def build_environment(spec: EnvironmentSpec) -> Environment:
    """Validate a spec and realize it as an evaluable environment."""
    validate_spec(spec)
    return Environment(spec)


def eval_velocity(env: Environment, x, t):
    """Speed a(x, t + k0) of the (possibly shifted) environment."""
    return env.speed(x, t)


def shift_time(env: Environment, k: int) -> Environment:
    """Apply the integer time-shift group element: index shift on the stream."""
    return env.shift_time(k)


# -- text-config serialization --------------------------------------------------


def spec_to_config(spec: EnvironmentSpec) -> str:
    """Render a spec as an ``[environment]`` key=value section."""
    lines = ["[environment]"]
    for k, v in spec.canonical_items():
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def spec_from_mapping(section) -> EnvironmentSpec:
    """Build a spec from a mapping of strings (e.g. a configparser section)."""
    try:
        dim = int(section["dim"])
        kind = section["kind"].strip()
        alpha = float(section["alpha"])
        beta = float(section["beta"])
        seed = int(section.get("seed", "0"))
    except (KeyError, ValueError) as exc:
        raise InvalidSpecError(f"bad environment section: {exc}") from exc
    modes = _modes_from_text(section.get("modes", ""), dim)
    drift = None
    if section.get("drift", "").strip():
        value = tuple(float(tok) for tok in section["drift"].split())
        try:
            eta = float(section["eta"])
        except (KeyError, ValueError) as exc:
            raise InvalidSpecError("drift requires an eta margin") from exc
        drift = DriftSpec(value=value, eta=eta)
    spec = EnvironmentSpec(
        dim=dim, kind=kind, alpha=alpha, beta=beta, modes=modes, drift=drift, seed=seed
    )
    validate_spec(spec)
    return spec


def spec_from_config(text: str) -> EnvironmentSpec:
    import configparser

    cp = configparser.ConfigParser()
    cp.read_string(text)
    if "environment" not in cp:
        raise InvalidSpecError("missing [environment] section")
    return spec_from_mapping(cp["environment"])
