"""Grid sets, hulls, set metrics, Minkowski sums, convex decomposition."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontlab import (
    GridSet,
    Polytope,
    caratheodory_decompose,
    convex_hull,
    hausdorff,
    hausdorff_directed,
    minkowski_sum,
    support_function,
)
from frontlab.exceptions import (
    EmptySetError,
    InvalidSpecError,
    NotInHullError,
    WindowOverflowError,
)
from frontlab.geometry import rasterize_box, rasterize_points


def random_grid(rng, n, h=0.25, m=40, span=2.0):
    pts = rng.uniform(-span, span, size=(m, n))
    return rasterize_points(pts, h, -span - 4 * h + np.zeros(n),
                            span + 4 * h + np.zeros(n))


def test_rasterize_box_counts():
    g = rasterize_box([0.0], [1.0], 0.125, [-1.0], [2.0])
    assert g.count == 8
    pts = g.occupied_points()
    assert pts.min() == pytest.approx(0.0625)
    assert pts.max() == pytest.approx(0.9375)

    g2 = rasterize_box([0.0, 0.0], [0.5, 1.0], 0.25, [-1, -1], [2, 2])
    assert g2.count == 2 * 4


def test_gridset_membership_and_interior():
    g = rasterize_box([0.0], [1.0], 0.25, [-2.0], [3.0])
    assert g.contains_points([[0.5]])[0]
    assert not g.contains_points([[1.7]])[0]
    assert not g.contains_points([[99.0]])[0]
    g.validate_interior()
    bad = GridSet(lo=np.array([0.0]), h=1.0, occ=np.array([True, False]))
    with pytest.raises(WindowOverflowError):
        bad.validate_interior()
    empty = GridSet(lo=np.array([0.0]), h=1.0, occ=np.array([False, False]))
    with pytest.raises(EmptySetError):
        empty.require_nonempty()


def test_hull_support_equals_max_dot():
    rng = np.random.default_rng(21)
    for n in (1, 2, 3):
        g = random_grid(rng, n)
        hull = convex_hull(g)
        pts = g.occupied_points()
        for _ in range(25):
            p = rng.normal(size=n)
            want = float(np.max(pts @ p))
            assert support_function(hull, p) == pytest.approx(want, abs=1e-9)
            assert support_function(g, p) == pytest.approx(want, abs=1e-9)


def test_hull_idempotent_and_contains_inputs():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(60, 2))
    hull = convex_hull(pts)
    again = convex_hull(hull.vertices)
    for _ in range(20):
        p = rng.normal(size=2)
        assert again.support(p) == pytest.approx(hull.support(p), abs=1e-12)
    assert hull.contains(pts, tol=1e-9).all()


def test_polytope_scaling_and_translation():
    sq = Polytope(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    assert sq.scaled(2.0).support(np.array([1.0, 1.0])) == pytest.approx(4.0)
    moved = sq.translated(np.array([3.0, -1.0]))
    assert moved.support(np.array([1.0, 0.0])) == pytest.approx(4.0)
    assert moved.contains(np.array([[3.5, -0.5]]))[0]


def test_minkowski_grid_matches_bruteforce():
    rng = np.random.default_rng(17)
    for n in (1, 2):
        a = random_grid(rng, n, h=0.25, m=12, span=1.0)
        b = random_grid(rng, n, h=0.25, m=9, span=1.0)
        s = minkowski_sum(a, b)
        pa = a.occupied_points()
        pb = b.occupied_points()
        brute = (pa[:, None, :] + pb[None, :, :]).reshape(-1, n)
        redraw = rasterize_points(brute, s.h, s.lo, s.hi)
        assert np.array_equal(redraw.occ, s.occ)


def test_minkowski_polytopes_support_additive():
    rng = np.random.default_rng(3)
    a = convex_hull(rng.normal(size=(20, 2)))
    b = convex_hull(rng.normal(size=(15, 2)))
    s = minkowski_sum(a, b)
    for _ in range(30):
        p = rng.normal(size=2)
        assert s.support(p) == pytest.approx(a.support(p) + b.support(p),
                                             abs=1e-9)


def test_hausdorff_known_values():
    # two single cells: distance between centers
    g1 = GridSet(lo=np.array([0.0, 0.0]), h=1.0,
                 occ=np.eye(1, 1, dtype=bool).reshape(1, 1))
    g2 = GridSet(lo=np.array([3.0, 4.0]), h=1.0,
                 occ=np.ones((1, 1), dtype=bool))
    assert hausdorff(g1, g2) == pytest.approx(5.0)

    small = Polytope(np.array([[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5],
                               [-0.5, 0.5]]))
    big = small.scaled(2.0)
    assert hausdorff_directed(small, big) == pytest.approx(0.0, abs=1e-12)
    assert hausdorff_directed(big, small) == pytest.approx(np.sqrt(0.5),
                                                           abs=1e-9)
    assert hausdorff(small, big) == pytest.approx(np.sqrt(0.5), abs=1e-9)


def test_hausdorff_translation_shrinks_to_zero():
    rng = np.random.default_rng(9)
    pts = rng.normal(size=(30, 2))
    p = convex_hull(pts)
    q = convex_hull(pts + np.array([1e-7, -1e-7]))
    assert hausdorff(p, q) < 1e-6


def test_caratheodory_reconstructs_interior_points():
    rng = np.random.default_rng(31)
    for n in (1, 2, 3):
        hull = convex_hull(rng.normal(size=(30, n)))
        for _ in range(10):
            lam = rng.dirichlet(np.ones(len(hull.vertices)))
            x = lam @ hull.vertices
            combo = caratheodory_decompose(hull, x)
            assert len(combo) <= n + 1
            w = np.array([c[1] for c in combo])
            v = np.array([c[0] for c in combo])
            assert np.all(w >= -1e-12)
            assert w.sum() == pytest.approx(1.0, abs=1e-9)
            assert np.allclose(w @ v, x, atol=1e-8)


def test_caratheodory_rejects_outside_points():
    hull = convex_hull(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    with pytest.raises(NotInHullError):
        caratheodory_decompose(hull, np.array([1.0, 1.0]))


def test_gridset_dump_load_roundtrip(tmp_path):
    rng = np.random.default_rng(41)
    g = random_grid(rng, 2, h=0.5, m=25)
    fn = tmp_path / "set.txt"
    g.dump(fn)
    back = GridSet.load(fn)
    assert back.h == g.h
    assert np.array_equal(back.lo, g.lo)
    assert np.array_equal(back.occ, g.occ)


def test_polytope_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(43)
    p = convex_hull(rng.normal(size=(12, 2)))
    fn = tmp_path / "poly.csv"
    p.to_csv(fn)
    back = Polytope.from_csv(fn)
    assert np.allclose(back.vertices, p.vertices)


def test_scale_gridset():
    g = rasterize_box([0.0], [1.0], 0.25, [-1.0], [2.0])
    doubled = g.scale(2.0)
    pts = doubled.occupied_points()
    assert pts.min() >= 0.0
    assert pts.max() <= 2.0 + doubled.h
    assert hausdorff_directed(doubled, g) > 0.4


def test_minkowski_type_checks():
    g = rasterize_box([0.0], [1.0], 0.25, [-1.0], [2.0])
    p = convex_hull(np.array([[0.0], [1.0]]))
    with pytest.raises(InvalidSpecError):
        minkowski_sum(g, p)


@settings(max_examples=50, deadline=None)
@given(scale=st.floats(0.01, 100.0), seed=st.integers(0, 2 ** 16))
def test_support_positive_homogeneity(scale, seed):
    rng = np.random.default_rng(seed)
    hull = convex_hull(rng.normal(size=(8, 2)))
    p = rng.normal(size=2)
    lhs = hull.support(scale * p)
    rhs = scale * hull.support(p)
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2 ** 16))
def test_support_subadditive(seed):
    rng = np.random.default_rng(seed)
    hull = convex_hull(rng.normal(size=(8, 2)))
    p = rng.normal(size=2)
    q = rng.normal(size=2)
    assert hull.support(p + q) <= hull.support(p) + hull.support(q) + 1e-9
