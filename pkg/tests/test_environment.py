"""Speed-field construction, bounds, shifts, and serialization."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontlab import (
    DriftSpec,
    EnvironmentSpec,
    FrozenTimeField,
    Mode,
    TimeReversedField,
    build_environment,
    eval_velocity,
    shift_time,
)
from frontlab.environment import spec_from_config, spec_to_config
from frontlab.exceptions import InvalidSpecError
from frontlab.hjsolver import EpsScaledField

from conftest import sine_mode


def dyadic_points(rng, m, n, denom=64, span=8):
    return rng.integers(-span * denom, span * denom, size=(m, n)) / denom


def test_constant_field_is_constant(const1d):
    rng = np.random.default_rng(11)
    x = rng.uniform(-5, 5, size=(40, 1))
    t = rng.uniform(0, 10, size=40)
    a = const1d.speed(x, t)
    assert np.all(a == 2.0)
    assert const1d.autonomous
    assert const1d.lipschitz_x() == 0.0
    assert const1d.lipschitz_t() == 0.0


def test_bounds_exact_on_random_samples(sin1d, sincos1d, rand1d, per2d):
    rng = np.random.default_rng(7)
    for env in (sin1d, sincos1d, rand1d, per2d):
        x = rng.uniform(-20, 20, size=(300, env.dim))
        t = rng.uniform(-5, 50, size=300)
        a = env.speed(x, t)
        assert np.all(a >= env.alpha)
        assert np.all(a <= env.beta)


def test_sine_field_frozen_values(sin1d):
    # 2*pi*0.25 - pi/2 is exactly zero in floats, so these are equalities
    assert sin1d.speed(np.array([0.25]), 0.0) == 3.0
    assert sin1d.speed(np.array([0.75]), 17.5) == 1.0
    assert abs(sin1d.speed(np.array([0.0]), 0.0) - 2.0) < 1e-15


def test_spacetime_field_frozen_values(sincos1d):
    assert sincos1d.speed(np.array([0.25]), 0.0) == 3.0
    assert sincos1d.speed(np.array([0.25]), 0.5) == 1.0
    assert abs(sincos1d.speed(np.array([0.25]), 0.25) - 2.0) < 1e-15


def test_spatial_periodicity_bitwise_on_lattice(sincos1d, rand1d, per2d):
    rng = np.random.default_rng(3)
    for env in (sincos1d, rand1d, per2d):
        x = dyadic_points(rng, 50, env.dim)
        t = rng.uniform(0, 7, size=50)
        for z in ([1] * env.dim, [-2] * env.dim, [3] + [0] * (env.dim - 1)):
            shifted = env.speed(x + np.asarray(z, dtype=float), t)
            base = env.speed(x, t)
            assert np.array_equal(shifted, base)


def test_time_shift_group_identity_bitwise(sincos1d, rand1d):
    rng = np.random.default_rng(5)
    for env in (sincos1d, rand1d):
        x = dyadic_points(rng, 30, 1)
        t = rng.integers(0, 64 * 6, size=30) / 64
        for k in (-3, -1, 1, 2, 3):
            lhs = shift_time(env, k).speed(x, t)
            rhs = env.speed(x, t + k)
            assert np.array_equal(lhs, rhs)


def test_time_shift_composition(rand1d):
    e = rand1d.shift_time(2).shift_time(3)
    assert e.k0 == rand1d.k0 + 5
    x = np.array([[0.125]])
    assert e.speed(x, 0.25) == rand1d.speed(x, 5.25)
    with pytest.raises(InvalidSpecError):
        rand1d.shift_time(0.5)


def test_random_time_is_piecewise_linear(rand1d):
    rng = np.random.default_rng(9)
    x = rng.uniform(-2, 2, size=(20, 1))
    for k in (0, 3, 11):
        a0 = rand1d.speed(x, float(k))
        a1 = rand1d.speed(x, float(k + 1))
        for theta in (0.25, 0.5, 0.8125):
            mix = rand1d.speed(x, k + theta)
            assert np.allclose(mix, (1 - theta) * a0 + theta * a1,
                               rtol=0, atol=1e-12)


def test_random_time_has_kinks_at_integers(rand1d):
    # one-sided slopes across t=4 disagree: the interpolated coefficient
    # sequence changes direction at integer knots for this seed
    x = np.array([[0.2]])
    d = 1.0 / 512
    left = (rand1d.speed(x, 4.0) - rand1d.speed(x, 4.0 - d)) / d
    right = (rand1d.speed(x, 4.0 + d) - rand1d.speed(x, 4.0)) / d
    assert abs(float(left[0] - right[0])) > 1e-3


def test_determinism_and_fingerprint(rand1d):
    twin = build_environment(rand1d.spec)
    x = np.random.default_rng(1).uniform(-3, 3, size=(50, 1))
    t = np.linspace(0, 9, 50)
    assert np.array_equal(twin.speed(x, t), rand1d.speed(x, t))
    assert twin.fingerprint() == rand1d.fingerprint()

    other = build_environment(
        EnvironmentSpec(dim=1, kind="random-time", alpha=1.0, beta=3.0,
                        modes=rand1d.spec.modes, seed=rand1d.spec.seed + 1))
    assert other.fingerprint() != rand1d.fingerprint()
    assert not np.array_equal(other.speed(x, t), rand1d.speed(x, t))


def test_lipschitz_bounds_hold_empirically(sincos1d, rand1d, per2d):
    rng = np.random.default_rng(13)
    for env in (sincos1d, rand1d, per2d):
        lx = env.lipschitz_x()
        lt = env.lipschitz_t()
        x = rng.uniform(-3, 3, size=(200, env.dim))
        dx = rng.normal(size=(200, env.dim))
        dx *= 1e-5 / np.linalg.norm(dx, axis=1, keepdims=True)
        t = rng.uniform(0.1, 8, size=200)
        da = np.abs(env.speed(x + dx, t) - env.speed(x, t))
        assert np.all(da <= lx * 1e-5 * (1 + 1e-6) + 1e-12)
        dt_probe = 1e-5
        da_t = np.abs(env.speed(x, t + dt_probe) - env.speed(x, t))
        assert np.all(da_t <= lt * dt_probe * (1 + 1e-6) + 1e-12)


def test_eval_velocity_matches_method(sin1d):
    x = np.array([[0.3], [0.6]])
    assert np.array_equal(eval_velocity(sin1d, x, 1.5), sin1d.speed(x, 1.5))


def test_invalid_specs_rejected():
    good = dict(dim=1, kind="periodic", alpha=1.0, beta=3.0)
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**{**good, "dim": 4}))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**{**good, "kind": "fancy"}))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**{**good, "beta": 0.5}))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**{**good, "alpha": -1.0}))
    heavy = (Mode(freq=(1,), amplitude=0.7), Mode(freq=(2,), amplitude=0.5))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**good, modes=heavy))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(**good, modes=(
            Mode(freq=(1, 2), amplitude=0.5),)))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(
            **good, drift=DriftSpec(value=(0.9,), eta=0.5)))
    with pytest.raises(InvalidSpecError):
        build_environment(EnvironmentSpec(
            dim=1, kind="periodic", alpha=1.0, beta=3.0,
            modes=tuple(Mode(freq=(i,), amplitude=0.1) for i in range(1, 10))))


def test_config_round_trip(rand1d, per2d, drift2d):
    for env in (rand1d, per2d, drift2d):
        text = spec_to_config(env.spec)
        back = spec_from_config(text)
        assert back == env.spec
        # a realized copy evaluates identically
        x = np.full((3, env.dim), 0.375)
        assert np.array_equal(build_environment(back).speed(x, 1.25),
                              env.speed(x, 1.25))


def test_time_reversed_field(sincos1d, drift1d):
    rev = TimeReversedField(sincos1d, t_end=2.5)
    x = np.array([[0.3], [0.9]])
    for tau in (0.0, 0.7, 2.5):
        assert np.array_equal(rev.speed(x, tau), sincos1d.speed(x, 2.5 - tau))
    rev_d = TimeReversedField(drift1d, t_end=1.0)
    assert np.array_equal(rev_d.drift(x, 0.25), -drift1d.drift(x, 0.75))
    assert rev_d.sup_drift == drift1d.sup_drift


def test_frozen_time_field(sincos1d, rand1d):
    for env in (sincos1d, rand1d):
        frozen = FrozenTimeField(env, 0.3125)
        x = np.array([[0.1], [0.8]])
        for t in (0.0, 0.5, 1.75):
            assert np.array_equal(frozen.speed(x, t), env.speed(x, t + 0.3125))


def test_eps_scaled_field(sincos1d):
    eps = 0.125
    scaled = EpsScaledField(sincos1d, eps)
    x = np.array([[0.3], [-1.7]])
    assert np.array_equal(scaled.speed(x, 0.75),
                          sincos1d.speed(x / eps, 0.75 / eps))
    assert scaled.lipschitz_x() == sincos1d.lipschitz_x() / eps
    with pytest.raises(InvalidSpecError):
        EpsScaledField(sincos1d, 0.0)


def test_drift_broadcast_and_flags(drift2d, sin1d):
    x = np.zeros((5, 2))
    b = drift2d.drift(x, 0.0)
    assert b.shape == (5, 2)
    assert np.all(b == np.array([0.5, -0.25]))
    assert drift2d.sup_drift == pytest.approx(np.hypot(0.5, 0.25))
    assert sin1d.drift(np.zeros((2, 1)), 0.0) is None
    assert not sin1d.has_drift


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-1e4, 1e4), t=st.floats(-1e3, 1e3))
def test_bounds_property(x, t):
    env = _prop_env()
    a = env.speed(np.array([x]), t)
    assert env.alpha <= a <= env.beta


def _prop_env(_cache=[]):
    if not _cache:
        _cache.append(build_environment(
            EnvironmentSpec(dim=1, kind="random-time", alpha=0.5, beta=2.5,
                            modes=(sine_mode(), ), seed=99)))
    return _cache[0]
