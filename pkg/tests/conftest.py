"""Shared environments and independent oracles for the test suite.

The fixtures here are the canonical media used across test modules: a
constant field, the 1-d sine field a(x) = 2 + sin(2*pi*x) and its
space-time variant a(x, t) = 2 + sin(2*pi*x)*cos(2*pi*t), a random-time
1-d field, a periodic 2-d field, and drifted constants.  The oracle
helpers (fixed-step RK4, quadrature of 1/a) are written from scratch so
they share no code with the library paths they are used to check.
"""

import numpy as np
import pytest

from frontlab import DriftSpec, EnvironmentSpec, Mode, build_environment

QUARTER_TURN = -np.pi / 2  # phase that turns cos(2*pi*x + phase) into sin(2*pi*x)


def sine_mode(tfreq=0):
    return Mode(freq=(1,), amplitude=1.0, phase=QUARTER_TURN, tfreq=tfreq)


@pytest.fixture(scope="session")
def const1d():
    return build_environment(
        EnvironmentSpec(dim=1, kind="periodic", alpha=2.0, beta=2.0))


@pytest.fixture(scope="session")
def const2d():
    return build_environment(
        EnvironmentSpec(dim=2, kind="periodic", alpha=2.0, beta=2.0))


@pytest.fixture(scope="session")
def sin1d():
    """a(x) = 2 + sin(2*pi*x), autonomous, alpha=1, beta=3."""
    return build_environment(
        EnvironmentSpec(dim=1, kind="periodic", alpha=1.0, beta=3.0,
                        modes=(sine_mode(),)))


@pytest.fixture(scope="session")
def sincos1d():
    """a(x, t) = 2 + sin(2*pi*x) * cos(2*pi*t)."""
    return build_environment(
        EnvironmentSpec(dim=1, kind="periodic", alpha=1.0, beta=3.0,
                        modes=(sine_mode(tfreq=1),)))


@pytest.fixture(scope="session")
def rand1d():
    """Random-time 1-d field with two spatial modes, seed frozen."""
    modes = (Mode(freq=(1,), amplitude=0.6, phase=0.4),
             Mode(freq=(2,), amplitude=0.4, phase=1.9))
    return build_environment(
        EnvironmentSpec(dim=1, kind="random-time", alpha=1.0, beta=3.0,
                        modes=modes, seed=2026))


@pytest.fixture(scope="session")
def per2d():
    """Periodic 2-d field, time-dependent, alpha=1, beta=3."""
    modes = (Mode(freq=(1, 0), amplitude=0.5, phase=0.3, tfreq=1, tphase=0.7),
             Mode(freq=(0, 1), amplitude=0.5, phase=1.1, tfreq=2, tphase=0.2))
    return build_environment(
        EnvironmentSpec(dim=2, kind="periodic", alpha=1.0, beta=3.0,
                        modes=modes))


@pytest.fixture(scope="session")
def drift1d():
    """Constant speed 2 with constant drift 0.5."""
    return build_environment(
        EnvironmentSpec(dim=1, kind="periodic", alpha=2.0, beta=2.0,
                        drift=DriftSpec(value=(0.5,), eta=1.0)))


@pytest.fixture(scope="session")
def drift2d():
    return build_environment(
        EnvironmentSpec(dim=2, kind="periodic", alpha=2.0, beta=2.0,
                        drift=DriftSpec(value=(0.5, -0.25), eta=1.0)))


def rk4_extremal(env, x0, t0, t1, n_steps, side="right"):
    """Fixed-step RK4 for x' = +/- a(x, t), one dimension.

    Independent of the library's integrator on purpose.  Step count should
    be chosen so integer times are grid points; the random-time fields are
    only piecewise smooth across integers.
    """
    sign = 1.0 if side == "right" else -1.0
    ts = np.linspace(float(t0), float(t1), int(n_steps) + 1)
    x = float(x0)

    def f(xx, tt):
        return sign * float(env.speed(np.array([xx]), tt))

    for i in range(int(n_steps)):
        hstep = ts[i + 1] - ts[i]
        t = ts[i]
        k1 = f(x, t)
        k2 = f(x + 0.5 * hstep * k1, t + 0.5 * hstep)
        k3 = f(x + 0.5 * hstep * k2, t + 0.5 * hstep)
        k4 = f(x + hstep * k3, t + hstep)
        x += hstep * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return x


def harmonic_mean_speed(env):
    """(integral_0^1 dx / a(x))^-1 by quadrature, for 1-d autonomous fields.

    This is the long-run speed of a monotone trajectory through a periodic
    autonomous medium: time to cross one period is the integral of 1/a.
    """
    from scipy.integrate import quad

    val, err = quad(lambda x: 1.0 / float(env.speed(np.array([x]), 0.0)),
                    0.0, 1.0, limit=200)
    assert err < 1e-9
    return 1.0 / val
