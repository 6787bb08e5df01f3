"""Effective Hamiltonian and the macroscopic Hopf-Lax solver."""

import numpy as np
import pytest

from frontlab import (
    EffectiveModel,
    Polytope,
    effective_hamiltonian,
    estimate_limit_shape,
    solve_homogenized,
)
from frontlab.exceptions import InvalidSpecError


def test_hamiltonian_is_support_function():
    model = EffectiveModel.from_interval(-2.0, 3.0)
    assert model.hamiltonian(np.array([[1.0]])) == pytest.approx(3.0)
    assert model.hamiltonian(np.array([[-1.0]])) == pytest.approx(2.0)
    assert model.hamiltonian(np.array([[0.0]])) == pytest.approx(0.0)
    sq = EffectiveModel(shape=Polytope(np.array(
        [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])))
    got = effective_hamiltonian(sq, np.array([[1.0, 1.0], [2.0, 0.0]]))
    assert np.allclose(got, [1.0, 2.0])


def test_hamiltonian_homogeneous_and_convex():
    rng = np.random.default_rng(4)
    model = EffectiveModel(shape=Polytope(rng.normal(size=(7, 2))))
    p = rng.normal(size=(20, 2))
    q = rng.normal(size=(20, 2))
    hp = np.atleast_1d(effective_hamiltonian(model, p))
    hq = np.atleast_1d(effective_hamiltonian(model, q))
    hsum = np.atleast_1d(effective_hamiltonian(model, p + q))
    assert np.all(hsum <= hp + hq + 1e-9)
    h2 = np.atleast_1d(effective_hamiltonian(model, 2.5 * p))
    assert np.allclose(h2, 2.5 * hp)
    with pytest.raises(InvalidSpecError):
        effective_hamiltonian(model, np.array([[1.0]]))


def test_from_estimate_carries_provenance(sin1d):
    est = estimate_limit_shape(sin1d, m_max=10.0, h=1 / 32)
    model = EffectiveModel.from_estimate(est)
    assert model.env_fingerprint == sin1d.fingerprint()
    assert model.source_h == est.h
    assert model.source_horizon == 10.0


def test_hopf_lax_linear_data_exact():
    # linear u0: min over y in x - tW of <g, y> = <g,x> - t*H(g)
    model = EffectiveModel.from_interval(-1.5, 0.5)
    g = 2.0

    def u0(pts):
        return g * pts[:, 0]

    fld = solve_homogenized(model, u0, [-1.0], [1.0], 0.125, [0.0, 1.0, 2.0])
    xs = fld.lo[0] + (np.arange(fld.values.shape[1]) + 0.5) * fld.h
    for j, t in enumerate((0.0, 1.0, 2.0)):
        want = g * xs - t * max(g * (-1.5), g * 0.5)
        assert np.allclose(fld.values[j], want, atol=1e-9)


def test_hopf_lax_cone_profile():
    # symmetric interval W = [-v, v], u0 = |x|: solution max(|x| - vt, 0)
    v = 0.75
    model = EffectiveModel.from_interval(-v, v)

    def u0(pts):
        return np.abs(pts[:, 0])

    fld = solve_homogenized(model, u0, [-2.0], [2.0], 1 / 16, [1.0],
                            membership_tol=1 / 64)
    xs = fld.lo[0] + (np.arange(fld.values.shape[1]) + 0.5) * fld.h
    want = np.maximum(np.abs(xs) - v, 0.0)
    assert np.max(np.abs(fld.values[0] - want)) <= 1 / 32


def test_hopf_lax_2d_anisotropic():
    # W = segment from (-1, 0) to (1, 0): no vertical motion at all
    model = EffectiveModel(shape=Polytope(np.array([[-1.0, 0.0], [1.0, 0.0]])))

    def u0(pts):
        return np.abs(pts[:, 0]) + np.abs(pts[:, 1])

    fld = solve_homogenized(model, u0, [-2.0, -2.0], [2.0, 2.0], 0.25, [1.0],
                            membership_tol=1 / 64)
    n0, n1 = fld.values.shape[1:]
    xs = fld.lo[0] + (np.arange(n0) + 0.5) * fld.h
    ys = fld.lo[1] + (np.arange(n1) + 0.5) * fld.h
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    want = np.maximum(np.abs(X) - 1.0, 0.0) + np.abs(Y)
    assert np.max(np.abs(fld.values[0] - want)) <= 1 / 16


def test_hopf_lax_monotone_in_time(sin1d):
    est = estimate_limit_shape(sin1d, m_max=10.0, h=1 / 32)
    model = EffectiveModel.from_estimate(est)

    def u0(pts):
        return np.minimum(np.abs(pts[:, 0]), 2.0)

    fld = solve_homogenized(model, u0, [-2.0], [2.0], 0.25,
                            [0.0, 0.5, 1.0], membership_tol=1 / 64)
    # monotone up to the sampling of the minimization set
    slack = 2.0 / 64
    assert np.all(fld.values[1] <= fld.values[0] + slack)
    assert np.all(fld.values[2] <= fld.values[1] + slack)


def test_solver_input_validation():
    model = EffectiveModel.from_interval(-1.0, 1.0)
    with pytest.raises(InvalidSpecError):
        solve_homogenized(model, lambda p: p[:, 0], [-1.0, 0.0], [1.0],
                          0.25, [1.0])
    with pytest.raises(InvalidSpecError):
        solve_homogenized(model, lambda p: p[:, 0], [-1.0], [1.0],
                          0.25, [-1.0])
    with pytest.raises(InvalidSpecError):
        EffectiveModel.from_interval(2.0, -2.0)
