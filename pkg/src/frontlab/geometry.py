"""Grid sets, convex polytopes, and the metric/lattice operations on them.

Two set representations are used throughout:

* ``GridSet``: boolean occupancy over an axis-aligned lattice window with
  spacing ``h``; cells are identified with their centers.
* ``Polytope``: a minimal list of extreme vertices of a convex set.

Hausdorff distances between grid sets are computed with the exact Euclidean
distance transform, so they are exact for the center point sets (the
underlying continuum sets differ by at most h/2 per side).  Convex hulls use
min/max in 1D, the monotone chain in 2D, and Qhull in 3D.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, signal

from .exceptions import (
    EmptySetError,
    InvalidSpecError,
    NotInHullError,
    WindowOverflowError,
)

MAX_CELLS = 400_000_000  # refuse to allocate windows beyond this


# ---------------------------------------------------------------------------
# GridSet
# ---------------------------------------------------------------------------


@dataclass
class GridSet:
    """Occupancy over the lattice of cell centers lo + (i + 1/2) h."""

    lo: np.ndarray  # (n,)
    h: float
    occ: np.ndarray  # boolean, n-dimensional

    def __post_init__(self):
        self.lo = np.asarray(self.lo, dtype=float).reshape(-1)
        self.occ = np.asarray(self.occ, dtype=bool)
        if self.occ.ndim != self.lo.size:
            raise InvalidSpecError("occupancy rank must match window dimension")

    @property
    def dim(self):
        return self.occ.ndim

    @property
    def hi(self):
        return self.lo + self.h * np.array(self.occ.shape)

    @property
    def count(self):
        return int(np.count_nonzero(self.occ))

    def require_nonempty(self):
        if not self.occ.any():
            raise EmptySetError("grid set is empty")

    def validate_interior(self):
        """Occupied cells must not touch the window boundary."""
        self.require_nonempty()
        for axis in range(self.dim):
            first = np.take(self.occ, 0, axis=axis)
            last = np.take(self.occ, self.occ.shape[axis] - 1, axis=axis)
            if first.any() or last.any():
                raise WindowOverflowError(
                    f"occupied cells touch the window boundary on axis {axis}"
                )

    def centers_axis(self, axis):
        n = self.occ.shape[axis]
        return self.lo[axis] + (np.arange(n) + 0.5) * self.h

    def occupied_points(self):
        """Centers of occupied cells, shape (count, n)."""
        idx = np.argwhere(self.occ)
        return self.lo + (idx + 0.5) * self.h

    def contains_points(self, pts):
        """Occupancy lookup for points (outside the window counts as False)."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        idx = np.floor((pts - self.lo) / self.h).astype(np.int64)
        ok = np.all((idx >= 0) & (idx < np.array(self.occ.shape)), axis=1)
        out = np.zeros(len(pts), dtype=bool)
        if ok.any():
            sel = tuple(idx[ok].T)
            out[ok] = self.occ[sel]
        return out

    def boundary_candidates(self):
        """Centers of occupied cells that are extreme along some lattice line.

        Sufficient input for convex hulls of the occupancy; keeps hull cost
        proportional to the surface, not the volume.
        """
        self.require_nonempty()
        if self.dim == 1:
            i = np.nonzero(self.occ)[0]
            idx = np.array([[i.min()], [i.max()]])
        elif self.dim == 2:
            pts = []
            for axis in range(2):
                other = 1 - axis
                any_line = self.occ.any(axis=axis)
                lines = np.nonzero(any_line)[0]
                arg = np.argmax(self.occ, axis=axis)
                rev = self.occ.shape[axis] - 1 - np.argmax(
                    np.flip(self.occ, axis=axis), axis=axis
                )
                for i in lines:
                    if axis == 0:
                        pts.append((arg[i], i))
                        pts.append((rev[i], i))
                    else:
                        pts.append((i, arg[i]))
                        pts.append((i, rev[i]))
            idx = np.unique(np.array(pts), axis=0)
        else:
            pts = []
            for axis in range(3):
                any_line = self.occ.any(axis=axis)
                arg = np.argmax(self.occ, axis=axis)
                rev = self.occ.shape[axis] - 1 - np.argmax(
                    np.flip(self.occ, axis=axis), axis=axis
                )
                for i, j in np.argwhere(any_line):
                    if axis == 0:
                        pts.append((arg[i, j], i, j))
                        pts.append((rev[i, j], i, j))
                    elif axis == 1:
                        pts.append((i, arg[i, j], j))
                    else:
                        pts.append((i, j, arg[i, j]))
            idx = np.unique(np.array(pts), axis=0)
        return self.lo + (idx + 0.5) * self.h

    def scale(self, c):
        """Rasterize {c*x : x in S} on the same spacing h."""
        self.require_nonempty()
        pts = self.occupied_points() * float(c)
        lo = pts.min(axis=0) - 2 * self.h
        hi = pts.max(axis=0) + 2 * self.h
        return rasterize_points(pts, self.h, lo, hi)

    # -- text dump / load ---------------------------------------------------

    def dump(self, path):
        dims = " ".join(str(s) for s in self.occ.shape)
        lo = " ".join(repr(float(v)) for v in self.lo)
        hi = " ".join(repr(float(v)) for v in self.hi)
        with open(path, "w") as fh:
            fh.write(f"{self.dim} {self.h!r} {lo} {hi} {dims}\n")
            flat = self.occ.reshape(-1, self.occ.shape[-1])
            for row in flat:
                fh.write("".join("1" if v else "0" for v in row) + "\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            header = fh.readline().split()
            n = int(header[0])
            h = float(header[1])
            lo = np.array([float(v) for v in header[2 : 2 + n]])
            dims = tuple(int(v) for v in header[2 + 2 * n :])
            rows = []
            for line in fh:
                line = line.strip()
                if line:
                    rows.append([ch == "1" for ch in line])
        occ = np.array(rows, dtype=bool).reshape(dims)
        return cls(lo=lo, h=h, occ=occ)


def rasterize_points(pts, h, lo, hi):
    """Mark every cell whose box contains one of the points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    lo = np.asarray(lo, dtype=float)
    dims = np.maximum(np.ceil((np.asarray(hi) - lo) / h - 1e-12), 1).astype(int)
    if np.prod(dims.astype(float)) > MAX_CELLS:
        raise WindowOverflowError(f"window of {dims} cells is too large")
    occ = np.zeros(tuple(dims), dtype=bool)
    idx = np.floor((pts - lo) / h).astype(np.int64)
    keep = np.all((idx >= 0) & (idx < dims), axis=1)
    occ[tuple(idx[keep].T)] = True
    return GridSet(lo=lo, h=h, occ=occ)


def rasterize_box(box_lo, box_hi, h, window_lo, window_hi):
    """Mark cells whose centers lie in the closed box [box_lo, box_hi]."""
    window_lo = np.asarray(window_lo, dtype=float)
    dims = np.maximum(
        np.ceil((np.asarray(window_hi) - window_lo) / h - 1e-12), 1
    ).astype(int)
    if np.prod(dims.astype(float)) > MAX_CELLS:
        raise WindowOverflowError(f"window of {dims} cells is too large")
    axes = [
        window_lo[d] + (np.arange(dims[d]) + 0.5) * h for d in range(len(dims))
    ]
    occ = np.ones(tuple(dims), dtype=bool)
    for d, ax in enumerate(axes):
        shape = [1] * len(dims)
        shape[d] = dims[d]
        line = (ax >= box_lo[d] - 1e-12) & (ax <= box_hi[d] + 1e-12)
        occ &= line.reshape(shape)
    return GridSet(lo=window_lo, h=h, occ=occ)


# ---------------------------------------------------------------------------
# Polytope
# ---------------------------------------------------------------------------


@dataclass
class Polytope:
    """Convex polytope stored as its extreme vertices, shape (m, n)."""

    vertices: np.ndarray

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if self.vertices.size == 0:
            raise EmptySetError("polytope needs at least one vertex")

    @property
    def dim(self):
        return self.vertices.shape[1]

    def norm(self):
        """max |v| over vertices (= sup-norm of the set in Euclidean metric)."""
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    def support(self, p):
        p = np.atleast_2d(np.asarray(p, dtype=float))
        vals = np.max(p @ self.vertices.T, axis=1)
        return vals if len(vals) > 1 else float(vals[0])

    def scaled(self, c):
        return Polytope(self.vertices * float(c))

    def translated(self, v):
        return Polytope(self.vertices + np.asarray(v, dtype=float))

    def contains(self, pts, tol=1e-9):
        """Membership test against the hull of the vertices."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = self.dim
        v = self.vertices
        if len(v) == 1:
            return np.linalg.norm(pts - v[0], axis=1) <= tol
        if n == 1:
            lo, hi = v.min(), v.max()
            return (pts[:, 0] >= lo - tol) & (pts[:, 0] <= hi + tol)
        eqs = _facet_inequalities(v)
        if eqs is None:  # degenerate: test distance to the affine piece
            return np.array([_point_poly_distance(p, v) <= tol for p in pts])
        a, b = eqs
        return np.all(pts @ a.T + b <= tol, axis=1)

    def to_csv(self, path):
        np.savetxt(path, self.vertices, delimiter=",", fmt="%.17g")

    @classmethod
    def from_csv(cls, path):
        return cls(np.loadtxt(path, delimiter=",", ndmin=2))


def _facet_inequalities(vertices):
    """Return (A, b) with the hull = {x : A x + b <= 0}, or None if degenerate."""
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(vertices)
    except QhullError:
        return None
    return hull.equations[:, :-1], hull.equations[:, -1]


# ---------------------------------------------------------------------------
# Convex hull
# ---------------------------------------------------------------------------


def _monotone_chain(points):
    """Andrew's monotone chain; returns extreme vertices in ccw order."""
    pts = np.unique(np.asarray(points, dtype=float), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:  # all points collinear: keep the two extremes
        d = pts[-1] - pts[0]
        proj = pts @ d
        return np.unique(np.array([pts[np.argmin(proj)], pts[np.argmax(proj)]]), axis=0)
    return hull


def convex_hull(obj) -> Polytope:
    """Convex hull as a minimal-vertex polytope.

    Accepts a point array or a GridSet (then only lattice-extreme candidates
    enter the hull computation).
    """
    if isinstance(obj, GridSet):
        pts = obj.boundary_candidates()
    else:
        pts = np.atleast_2d(np.asarray(obj, dtype=float))
    if pts.size == 0:
        raise EmptySetError("cannot take hull of nothing")
    n = pts.shape[1]
    if n == 1:
        x = pts[:, 0]
        verts = np.array([[x.min()], [x.max()]])
        if verts[0, 0] == verts[1, 0]:
            verts = verts[:1]
        return Polytope(verts)
    if n == 2:
        return Polytope(_monotone_chain(pts))
    from scipy.spatial import ConvexHull, QhullError

    uniq = np.unique(pts, axis=0)
    if len(uniq) <= 3:
        return Polytope(uniq)
    try:
        hull = ConvexHull(uniq)
    except QhullError:
        try:
            hull = ConvexHull(uniq, qhull_options="QJ")
        except QhullError as exc:
            raise InvalidSpecError(f"degenerate 3D hull input: {exc}") from exc
    return Polytope(uniq[hull.vertices])


def support_function(obj, p):
    """sup over the set of <p, .> ; for polytopes the max over vertices."""
    if isinstance(obj, GridSet):
        obj = convex_hull(obj)
    return obj.support(p)


# ---------------------------------------------------------------------------
# Hausdorff distance
# ---------------------------------------------------------------------------


def _grid_to_grid_directed(a: GridSet, b: GridSet):
    """sup over occupied centers of A of the distance to occupied centers of B.

    Both sets are laid onto the common bounding lattice first; the exact EDT
    of B's complement then gives every distance in one pass.
    """
    a.require_nonempty()
    b.require_nonempty()
    if abs(a.h - b.h) > 1e-12:
        raise InvalidSpecError("grid sets must share the lattice spacing")
    h = a.h
    # common integer frame
    shift_cells = (b.lo - a.lo) / h
    shift_int = np.round(shift_cells).astype(int)
    if not np.allclose(shift_cells, shift_int, atol=1e-9):
        raise InvalidSpecError("grid windows are not lattice-aligned")
    lo_cells = np.minimum(0, shift_int)
    hi_cells = np.maximum(np.array(a.occ.shape), shift_int + np.array(b.occ.shape))
    dims = hi_cells - lo_cells
    big_b = np.zeros(tuple(dims), dtype=bool)
    sl_b = tuple(
        slice(shift_int[d] - lo_cells[d], shift_int[d] - lo_cells[d] + b.occ.shape[d])
        for d in range(a.dim)
    )
    big_b[sl_b] = b.occ
    dist = ndimage.distance_transform_edt(~big_b, sampling=h)
    sl_a = tuple(
        slice(-lo_cells[d], -lo_cells[d] + a.occ.shape[d]) for d in range(a.dim)
    )
    return float(dist[sl_a][a.occ].max())


def _point_poly_distance(p, vertices):
    """Euclidean distance from a point to the hull of the vertices."""
    p = np.asarray(p, dtype=float)
    v = np.atleast_2d(vertices)
    n = v.shape[1]
    if len(v) == 1:
        return float(np.linalg.norm(p - v[0]))
    if n == 1:
        lo, hi = v.min(), v.max()
        return float(max(lo - p[0], p[0] - hi, 0.0))
    if n == 2:
        eqs = _facet_inequalities(v)
        if eqs is not None:
            a, b = eqs
            if np.all(p @ a.T + b <= 1e-12):
                return 0.0
        # min over edges of point-segment distance (vertices are in hull order
        # only for our own 2D hulls, so check all pairs of a small vertex set)
        best = np.inf
        m = len(v)
        for i in range(m):
            for j in range(i + 1, m):
                best = min(best, _point_segment_distance(p, v[i], v[j]))
        return float(best)
    # n == 3: project on all triangles of hull facets
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(v)
    except QhullError:
        best = np.inf
        for i in range(len(v)):
            for j in range(i + 1, len(v)):
                best = min(best, _point_segment_distance(p, v[i], v[j]))
        return float(best)
    if np.all(p @ hull.equations[:, :-1].T + hull.equations[:, -1] <= 1e-12):
        return 0.0
    best = np.inf
    for simplex in hull.simplices:
        best = min(best, _point_triangle_distance(p, *v[simplex]))
    return float(best)


def _point_segment_distance(p, a, b):
    d = b - a
    denom = float(d @ d)
    if denom == 0.0:
        return float(np.linalg.norm(p - a))
    t = np.clip((p - a) @ d / denom, 0.0, 1.0)
    return float(np.linalg.norm(p - (a + t * d)))


def _point_triangle_distance(p, a, b, c):
    # project to the triangle plane and clamp via the three edge subproblems
    ab, ac, ap = b - a, c - a, p - a
    nrm = np.cross(ab, ac)
    nn = float(nrm @ nrm)
    if nn < 1e-30:
        return min(
            _point_segment_distance(p, a, b),
            _point_segment_distance(p, a, c),
            _point_segment_distance(p, b, c),
        )
    # barycentric coordinates of the projection
    d1, d2 = float(ab @ ap), float(ac @ ap)
    d11, d22, d12 = float(ab @ ab), float(ac @ ac), float(ab @ ac)
    denom = d11 * d22 - d12 * d12
    u = (d22 * d1 - d12 * d2) / denom
    v = (d11 * d2 - d12 * d1) / denom
    if u >= 0 and v >= 0 and u + v <= 1:
        proj = a + u * ab + v * ac
        return float(np.linalg.norm(p - proj))
    return min(
        _point_segment_distance(p, a, b),
        _point_segment_distance(p, a, c),
        _point_segment_distance(p, b, c),
    )


def _points_poly_distance_2d(pts, vertices):
    """Distances from many points to one 2-d hull, vectorized over both."""
    from scipy.spatial import ConvexHull, QhullError

    try:
        hull = ConvexHull(vertices)
    except QhullError:
        return np.array([_point_poly_distance(p, vertices) for p in pts])
    a_eq, b_eq = hull.equations[:, :-1], hull.equations[:, -1]
    out = np.zeros(len(pts))
    outside = ~np.all(pts @ a_eq.T + b_eq <= 1e-12, axis=1)
    if not outside.any():
        return out
    va = vertices[hull.vertices]
    vb = vertices[np.roll(hull.vertices, -1)]
    d = vb - va
    denom = np.einsum("ij,ij->i", d, d)
    denom = np.where(denom == 0.0, 1.0, denom)
    q = pts[outside]
    frac = ((q[:, None, :] - va[None]) * d[None]).sum(-1) / denom[None]
    proj = va[None] + np.clip(frac, 0.0, 1.0)[..., None] * d[None]
    out[outside] = np.linalg.norm(q[:, None, :] - proj, axis=-1).min(axis=1)
    return out


def _poly_to_poly_directed(a: Polytope, b: Polytope):
    # the directed Hausdorff distance of convex sets is attained at a vertex
    if a.dim == 2 and len(a.vertices) >= 4 and len(b.vertices) >= 4:
        return float(np.max(_points_poly_distance_2d(a.vertices, b.vertices)))
    return max(_point_poly_distance(v, b.vertices) for v in a.vertices)


def hausdorff(a, b):
    """Hausdorff distance between grid sets and/or polytopes.

    Grid/grid uses the exact distance transform on cell centers; polytope
    pairs are exact (vertex extremality of the directed distance); mixed pairs
    rasterize the polytope on the grid's lattice first (slack <= h).
    """
    if isinstance(a, GridSet) and isinstance(b, GridSet):
        return max(_grid_to_grid_directed(a, b), _grid_to_grid_directed(b, a))
    if isinstance(a, Polytope) and isinstance(b, Polytope):
        return max(_poly_to_poly_directed(a, b), _poly_to_poly_directed(b, a))
    if isinstance(a, Polytope):
        a, b = b, a
    # a: GridSet, b: Polytope
    lo = np.minimum(a.lo, b.vertices.min(axis=0) - 2 * a.h)
    hi = np.maximum(a.hi, b.vertices.max(axis=0) + 2 * a.h)
    dims = np.ceil((hi - lo) / a.h - 1e-12).astype(int)
    axes = [lo[d] + (np.arange(dims[d]) + 0.5) * a.h for d in range(a.dim)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    occ = b.contains(mesh.reshape(-1, a.dim), tol=a.h * 0.5).reshape(tuple(dims))
    if not occ.any():  # tiny polytope between centers: mark nearest cell
        idx = np.clip(
            np.floor((b.vertices.mean(axis=0) - lo) / a.h).astype(int), 0, dims - 1
        )
        occ[tuple(idx)] = True
    braster = GridSet(lo=lo, h=a.h, occ=occ)
    return max(_grid_to_grid_directed(a, braster), _grid_to_grid_directed(braster, a))


def hausdorff_directed(a, b):
    """One-sided excess sup_{x in A} dist(x, B)."""
    if isinstance(a, GridSet) and isinstance(b, GridSet):
        return _grid_to_grid_directed(a, b)
    if isinstance(a, Polytope) and isinstance(b, Polytope):
        return _poly_to_poly_directed(a, b)
    raise InvalidSpecError("directed distance needs two sets of the same kind")


# ---------------------------------------------------------------------------
# Minkowski sum
# ---------------------------------------------------------------------------


def _resample_grid(g: GridSet, h):
    pts = g.occupied_points()
    return rasterize_points(pts, h, g.lo, g.hi + h)


def minkowski_sum(a, b):
    """Minkowski sum.

    GridSet + GridSet works by FFT convolution of the occupancies (exact on
    the lattice); spacings are resampled to the finer one if they differ;
    Polytope + Polytope sums vertices and re-hulls.
    """
    if isinstance(a, Polytope) and isinstance(b, Polytope):
        sums = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
        return convex_hull(sums)
    if not (isinstance(a, GridSet) and isinstance(b, GridSet)):
        raise InvalidSpecError("minkowski_sum wants two grid sets or two polytopes")
    if abs(a.h - b.h) > 1e-12:
        h = min(a.h, b.h)
        a = a if abs(a.h - h) < 1e-12 else _resample_grid(a, h)
        b = b if abs(b.h - h) < 1e-12 else _resample_grid(b, h)
    a.require_nonempty()
    b.require_nonempty()
    out_dims = np.array(a.occ.shape) + np.array(b.occ.shape) - 1
    if np.prod(out_dims.astype(float)) > MAX_CELLS:
        raise WindowOverflowError("minkowski sum exceeds the representable window")
    conv = signal.fftconvolve(a.occ.astype(np.float64), b.occ.astype(np.float64))
    occ = conv > 0.5
    # centers: (ia + ib + 1) h + lo_a + lo_b = lo_out + (i + 1/2) h
    lo = a.lo + b.lo + 0.5 * a.h
    return GridSet(lo=lo, h=a.h, occ=occ)


# ---------------------------------------------------------------------------
# Caratheodory decomposition
# ---------------------------------------------------------------------------


def caratheodory_decompose(poly: Polytope, x, tol=1e-9):
    """Write x as a convex combination of at most dim+1 vertices.

    Starts from any feasible convex combination (linear program) and strips
    vertices via affine dependences until no more than n+1 carry weight.
    Raises NotInHullError when x is not in the hull (beyond tol).
    """
    from scipy.optimize import linprog

    x = np.asarray(x, dtype=float).reshape(-1)
    v = poly.vertices
    m, n = v.shape
    if x.size != n:
        raise InvalidSpecError("point dimension mismatch")
    if m == 1:
        if np.linalg.norm(x - v[0]) > tol:
            raise NotInHullError("single-vertex polytope does not contain x")
        return [(v[0].copy(), 1.0)]
    # feasibility LP: V^T w = x, sum w = 1, w >= 0
    a_eq = np.vstack([v.T, np.ones(m)])
    b_eq = np.concatenate([x, [1.0]])
    res = linprog(np.zeros(m), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * m,
                  method="highs")
    if not res.success:
        raise NotInHullError(f"point {x} lies outside the hull")
    w = np.maximum(res.x, 0.0)
    w = w / w.sum()
    active = np.nonzero(w > tol * 1e-3)[0]

    # affine-dependence elimination until <= n+1 points remain
    while len(active) > n + 1:
        pts = v[active]
        # find mu != 0 with sum mu_i = 0 and sum mu_i pts_i = 0
        sys = np.vstack([pts.T, np.ones(len(active))])
        _, _, vh = np.linalg.svd(sys)
        mu = vh[-1]
        if np.max(np.abs(mu)) < 1e-14:
            break
        wa = w[active]
        with np.errstate(divide="ignore"):
            ratios = np.where(mu > 1e-15, wa / mu, np.inf)
        j = int(np.argmin(ratios))
        step = ratios[j]
        if not np.isfinite(step):
            mu = -mu
            ratios = np.where(mu > 1e-15, wa / mu, np.inf)
            j = int(np.argmin(ratios))
            step = ratios[j]
        wa = wa - step * mu
        wa[j] = 0.0
        w[active] = np.maximum(wa, 0.0)
        active = active[w[active] > tol * 1e-3]
    w_act = w[active]
    w_act = w_act / w_act.sum()
    recon = w_act @ v[active]
    if np.linalg.norm(recon - x) > max(tol, 1e-7):
        raise NotInHullError(
            f"decomposition residual {np.linalg.norm(recon - x):.2e} exceeds tolerance"
        )
    return [(v[i].copy(), float(wi)) for i, wi in zip(active, w_act)]
