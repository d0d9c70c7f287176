"""Compact convex sets in R^d as vertex-list polytopes.

Everything downstream (alpha-cuts, Minkowski arithmetic, Hausdorff
distances) is built on :class:`Polytope`, whose vertex list is always kept
in canonical form: exactly the extreme points, counterclockwise from the
lexicographically smallest vertex in the plane, lexicographically sorted in
higher dimensions.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.spatial import ConvexHull
from scipy.special import ndtri
from scipy.stats import qmc

from ._backend import kernels
from .errors import (
    DimensionMismatch,
    EmptyInput,
    EmptyIntersection,
    UnboundedIntersection,
)

DEDUP_TOL = 1e-12
MEMBERSHIP_TOL = 1e-9


def _as_points(points):
    try:
        arr = np.array(points, dtype=np.float64)
    except ValueError as exc:
        raise DimensionMismatch("points have inconsistent dimension") from exc
    if arr.size == 0:
        raise EmptyInput("cannot build a polytope from an empty point list")
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionMismatch("points must form an (n, d) array")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def _dedup(pts):
    order = np.lexsort(pts.T[::-1])
    kept = []
    for i in order:
        p = pts[i]
        if kept and np.any(np.max(np.abs(pts[kept] - p), axis=1) <= DEDUP_TOL):
            continue
        kept.append(i)
    return pts[kept]


def _hull_tol(pts):
    ext = float(np.max(np.abs(pts - pts.mean(axis=0)))) if len(pts) else 0.0
    return 1e-12 * ext


def _hull_nd(pts):
    pts = _dedup(pts)
    if len(pts) == 1:
        return pts
    x = pts - pts.mean(axis=0)
    _, sv, vt = np.linalg.svd(x, full_matrices=False)
    rank = int(np.sum(sv > 1e-10 * sv[0]))
    coords = x @ vt[:rank].T
    if rank == 1:
        idx = np.array([np.argmin(coords[:, 0]), np.argmax(coords[:, 0])])
    elif rank == 2:
        idx = kernels.hull2d(np.ascontiguousarray(coords), _hull_tol(coords))
    else:
        idx = ConvexHull(coords).vertices
    out = pts[np.unique(idx)]
    return out[np.lexsort(out.T[::-1])]


class Polytope:
    """A non-empty compact convex subset of R^d stored by its extreme points.

    Instances are immutable; the vertex array is read-only. Construct with
    :func:`canonicalize` (or ``Polytope(points)``, which does the same).
    """

    __slots__ = ("_v",)

    def __init__(self, points):
        self._v = _canonical_vertices(_as_points(points))
        self._v.setflags(write=False)

    @classmethod
    def _trusted(cls, vertices):
        obj = object.__new__(cls)
        v = np.array(vertices, dtype=np.float64)
        v.setflags(write=False)
        obj._v = v
        return obj

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def dim(self) -> int:
        return self._v.shape[1]

    def __len__(self):
        return self._v.shape[0]

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self._v.shape == other._v.shape and bool(np.all(self._v == other._v))

    __hash__ = None

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={self._v.tolist()})"

    def isclose(self, other, tol=1e-9):
        """Vertexwise comparison of canonical forms."""
        return self._v.shape == other._v.shape and bool(np.max(np.abs(self._v - other._v), initial=0.0) <= tol)

    def support(self, u):
        return support_value(self, u)

    def translate(self, v):
        """``P + {v}``; translation keeps the canonical vertex order."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"translation of dimension {v.shape} for a {self.dim}-d polytope")
        return Polytope._trusted(self._v + v)

    @property
    def centroid(self):
        return self._v.mean(axis=0)

    def to_json(self):
        return {"dim": self.dim, "vertices": self._v.tolist()}

    @classmethod
    def from_json(cls, obj):
        pts = obj["vertices"]
        poly = cls(pts)
        if poly.dim != int(obj["dim"]):
            raise DimensionMismatch(f"declared dim {obj['dim']} but vertices are {poly.dim}-d")
        return poly


def _canonical_vertices(pts):
    d = pts.shape[1]
    if d < 2:
        raise DimensionMismatch("polytopes need dimension d >= 2")
    if d == 2:
        idx = kernels.hull2d(np.ascontiguousarray(pts), _hull_tol(pts))
        return pts[idx]
    return _hull_nd(pts)


def canonicalize(points) -> Polytope:
    """Convex hull of ``points`` in canonical vertex form."""
    return Polytope(points)


def origin(dim: int) -> Polytope:
    return Polytope._trusted(np.zeros((1, dim)))


def _check_dim(p: Polytope, q: Polytope):
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")


def support_value(p: Polytope, u) -> float:
    """``max_v <u, v>`` over the vertices; ``u`` need not be a unit vector."""
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (p.dim,):
        raise DimensionMismatch(f"direction of shape {u.shape} for a {p.dim}-d polytope")
    return float(kernels.support_max(p.vertices, u[None, :])[0])


def support_values(p: Polytope, directions) -> np.ndarray:
    """Vectorized :func:`support_value` over the rows of ``directions``."""
    u = np.asarray(directions, dtype=np.float64)
    if u.ndim != 2 or u.shape[1] != p.dim:
        raise DimensionMismatch(f"directions of shape {u.shape} for a {p.dim}-d polytope")
    return kernels.support_max(p.vertices, u)


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    _check_dim(p, q)
    if len(q) == 1:
        return p.translate(q.vertices[0])
    if len(p) == 1:
        return q.translate(p.vertices[0])
    sums = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, p.dim)
    return Polytope(sums)


def scale_set(lam: float, p: Polytope) -> Polytope:
    lam = float(lam)
    if not math.isfinite(lam):
        raise ValueError("scale factor must be finite")
    if lam == 0.0:
        return origin(p.dim)
    if lam > 0.0 and lam * float(np.ptp(p.vertices)) > 1e-6:
        # positive scaling keeps the canonical order unless vertices start to merge
        return Polytope._trusted(lam * p.vertices)
    return Polytope(lam * p.vertices)


class DirectionGrid:
    """Unit directions on S^{d-1} with quadrature weights for the normalized
    surface measure.

    Use :meth:`uniform` for the standard deterministic grids: equally spaced
    angles in the plane, a Fibonacci lattice on S^2, and normalized Halton
    points beyond that.
    """

    __slots__ = ("directions", "weights")

    def __init__(self, directions, weights=None):
        u = np.array(directions, dtype=np.float64)
        if u.ndim != 2 or u.shape[1] < 2:
            raise DimensionMismatch("directions must be an (M, d) array with d >= 2")
        if u.shape[0] < 4:
            raise ValueError("a direction grid needs at least 4 directions")
        if np.max(np.abs(np.linalg.norm(u, axis=1) - 1.0)) > 1e-12:
            raise ValueError("grid directions must be unit vectors")
        if weights is None:
            w = np.full(u.shape[0], 1.0 / u.shape[0])
        else:
            w = np.array(weights, dtype=np.float64)
            if w.shape != (u.shape[0],) or np.any(w <= 0) or abs(w.sum() - 1.0) > 1e-12:
                raise ValueError("weights must be positive, one per direction, summing to 1")
        u.setflags(write=False)
        w.setflags(write=False)
        self.directions = u
        self.weights = w

    @property
    def dim(self) -> int:
        return self.directions.shape[1]

    @property
    def size(self) -> int:
        return self.directions.shape[0]

    def __len__(self):
        return self.size

    def __eq__(self, other):
        if not isinstance(other, DirectionGrid):
            return NotImplemented
        return (self.directions.shape == other.directions.shape
                and bool(np.all(self.directions == other.directions))
                and bool(np.all(self.weights == other.weights)))

    __hash__ = None

    def __repr__(self):
        return f"DirectionGrid(dim={self.dim}, M={self.size})"

    @classmethod
    def uniform(cls, dim: int, m: int) -> "DirectionGrid":
        if dim < 2:
            raise DimensionMismatch("direction grids need d >= 2")
        if m < 4:
            raise ValueError("a direction grid needs at least 4 directions")
        if dim == 2:
            theta = 2.0 * np.pi * np.arange(m) / m
            u = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        elif dim == 3:
            i = np.arange(m) + 0.5
            z = 1.0 - 2.0 * i / m
            r = np.sqrt(1.0 - z * z)
            phi = np.pi * (3.0 - math.sqrt(5.0)) * np.arange(m)
            u = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
        else:
            pts = qmc.Halton(d=dim, scramble=False).random(m + 1)[1:]
            u = ndtri(np.clip(pts, 1e-12, 1 - 1e-12))
        u = u / np.linalg.norm(u, axis=1, keepdims=True)
        return cls(u)

    def augmented(self, extra) -> "DirectionGrid":
        """This grid plus ``extra`` directions (normalized), with uniform weights."""
        e = np.atleast_2d(np.asarray(extra, dtype=np.float64))
        e = e / np.linalg.norm(e, axis=1, keepdims=True)
        return DirectionGrid(np.vstack([self.directions, e]))


class HalfspaceOracle:
    """Membership test ``x in C  iff  <u_m, x> <= f(u_m)`` for every grid direction."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: DirectionGrid, values):
        v = np.array(values, dtype=np.float64)
        if v.shape != (grid.size,):
            raise ValueError(f"need {grid.size} support values, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("support values must be finite")
        v.setflags(write=False)
        self.grid = grid
        self.values = v

    @classmethod
    def of(cls, p: Polytope, grid: DirectionGrid) -> "HalfspaceOracle":
        if p.dim != grid.dim:
            raise DimensionMismatch(f"{p.dim}-d polytope on a {grid.dim}-d grid")
        return cls(grid, support_values(p, grid.directions))

    def contains(self, x) -> bool:
        return contains(self, x)


def contains(oracle: HalfspaceOracle, x) -> bool:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (oracle.grid.dim,):
        raise DimensionMismatch(f"point of shape {x.shape} for a {oracle.grid.dim}-d oracle")
    return bool(np.all(oracle.grid.directions @ x <= oracle.values + MEMBERSHIP_TOL))


def hausdorff(p: Polytope, q: Polytope, grid: DirectionGrid | None = None) -> float:
    """Hausdorff distance via support functions.

    Exact in the plane (``grid`` is ignored). For d > 2 this is the max of
    ``|s_P - s_Q|`` over ``grid``, a lower bound that tightens as the grid
    is refined.
    """
    _check_dim(p, q)
    if p.dim == 2:
        return float(kernels.hausdorff2d(p.vertices, q.vertices))
    if grid is None:
        raise ValueError("a direction grid is required for d > 2")
    if grid.dim != p.dim:
        raise DimensionMismatch(f"{grid.dim}-d grid for {p.dim}-d polytopes")
    diff = support_values(p, grid.directions) - support_values(q, grid.directions)
    return float(np.max(np.abs(diff)))


def reconstruct_2d(directions, values) -> Polytope:
    """Recover ``{x : <u_m, x> <= f_m for all m}`` as a canonical polygon.

    ``directions`` may be a :class:`DirectionGrid` or any (M, 2) array of
    unit normals with M >= 3 that positively span the plane.

    Raises
    ------
    EmptyIntersection
        If the half-planes share no point.
    UnboundedIntersection
        If the normals leave an angular gap of at least pi.
    """
    u = directions.directions if isinstance(directions, DirectionGrid) else np.asarray(directions, dtype=np.float64)
    f = np.asarray(values, dtype=np.float64)
    if u.ndim != 2 or u.shape[1] != 2:
        raise DimensionMismatch("reconstruct_2d needs planar directions")
    if u.shape[0] < 3 or f.shape != (u.shape[0],):
        raise ValueError("need M >= 3 directions and one value per direction")
    ang = np.sort(np.arctan2(u[:, 1], u[:, 0]))
    gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * np.pi]]))
    if np.max(gaps) >= np.pi - 1e-12:
        raise UnboundedIntersection("directions do not positively span the plane")
    scale = max(1.0, float(np.max(np.abs(f))))
    tol = MEMBERSHIP_TOL * scale
    # every x has a normal within half the largest gap, so |x| cos(gap/2) <= max f
    bound = 2.0 * scale / math.cos(0.5 * float(np.max(gaps)))
    pts = kernels.clip_halfplanes(u, f, bound, tol)
    if pts.shape[0] == 0:
        raise EmptyIntersection("support values are inconsistent: half-planes do not intersect")
    return _merge_close(Polytope(pts), tol)


def _merge_close(p: Polytope, tol: float) -> Polytope:
    # clipping leaves slivers of width ~tol around degenerate (segment/point) answers
    v = p.vertices
    if len(v) == 1:
        return p
    keep = [v[0]]
    for x in v[1:]:
        if np.max(np.abs(x - keep[-1])) > tol:
            keep.append(x)
    if len(keep) > 1 and np.max(np.abs(keep[-1] - keep[0])) <= tol:
        keep.pop()
    if len(keep) == len(v):
        return p
    return Polytope(np.array(keep))
