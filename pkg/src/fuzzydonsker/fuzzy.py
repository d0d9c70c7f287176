"""Discrete fuzzy vectors: nested alpha-cut stacks of polytopes.

A :class:`FuzzyVector` pairs an :class:`AlphaGrid` with one polytope per
level. Its support surface (``support_surface``) is the discretized image
of the support-function embedding, on which the L^p distances ``rho_p``
are quadrature sums.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .convex import (
    DirectionGrid,
    Polytope,
    hausdorff,
    minkowski_sum,
    scale_set,
    support_values,
)
from .errors import DimensionMismatch, GridMismatch, NotNested

NEST_TOL = 1e-9
DEFAULT_LEVELS = 10


class AlphaGrid:
    """Levels ``0 < a_1 < ... < a_L = 1`` with right-endpoint weights
    ``a_l - a_{l-1}`` (``a_0 = 0``) unless weights are given."""

    __slots__ = ("levels", "weights")

    def __init__(self, levels, weights=None):
        a = np.array(levels, dtype=np.float64)
        if a.ndim != 1 or a.size == 0:
            raise ValueError("alpha grid needs at least one level")
        if not np.all(np.isfinite(a)) or a[0] <= 0.0 or np.any(np.diff(a) <= 0.0):
            raise ValueError("alpha levels must be strictly increasing in (0, 1]")
        if a[-1] != 1.0:
            raise ValueError("the last alpha level must be exactly 1")
        if weights is None:
            n = a.size
            if np.array_equal(a, np.arange(1, n + 1) / n):
                w = np.full(n, 1.0 / n)
            else:
                w = np.diff(np.concatenate([[0.0], a]))
        else:
            w = np.array(weights, dtype=np.float64)
            if w.shape != a.shape or np.any(w <= 0):
                raise ValueError("alpha weights must be positive, one per level")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("alpha weights must sum to 1")
        a.setflags(write=False)
        w.setflags(write=False)
        self.levels = a
        self.weights = w

    @classmethod
    def uniform(cls, n_levels: int = DEFAULT_LEVELS) -> "AlphaGrid":
        if n_levels < 1:
            raise ValueError("need at least one alpha level")
        return cls(np.arange(1, n_levels + 1) / n_levels)

    def __len__(self):
        return self.levels.size

    def __eq__(self, other):
        if not isinstance(other, AlphaGrid):
            return NotImplemented
        return (self.levels.shape == other.levels.shape
                and bool(np.all(self.levels == other.levels))
                and bool(np.all(self.weights == other.weights)))

    __hash__ = None

    def __repr__(self):
        return f"AlphaGrid(L={len(self)})"

    def index(self, alpha: float) -> int:
        """Position of ``alpha`` in the grid (within 1e-12)."""
        hits = np.flatnonzero(np.abs(self.levels - alpha) <= 1e-12)
        if hits.size == 0:
            raise ValueError(f"alpha={alpha} is not a grid level")
        return int(hits[0])


def _validation_grid(dim):
    return DirectionGrid.uniform(dim, 64 if dim == 2 else 256)


class FuzzyVector:
    """Nested stack of alpha-cuts, one polytope per level of ``alpha``.

    The constructor rejects stacks whose support values increase with alpha
    anywhere on a fixed validation grid (tolerance 1e-9).
    """

    __slots__ = ("alpha", "cuts")

    def __init__(self, alpha: AlphaGrid, cuts, *, validate: bool = True):
        cuts = tuple(cuts)
        if len(cuts) != len(alpha):
            raise ValueError(f"{len(alpha)} alpha levels but {len(cuts)} cuts")
        dims = {c.dim for c in cuts}
        if len(dims) != 1:
            raise DimensionMismatch(f"cuts of mixed dimension {sorted(dims)}")
        self.alpha = alpha
        self.cuts = cuts
        if validate:
            self._check_nested()

    def _check_nested(self):
        grid = _validation_grid(self.dim)
        vals = np.stack([support_values(c, grid.directions) for c in self.cuts])
        running_min = np.minimum.accumulate(vals, axis=0)
        excess = vals[1:] - running_min[:-1]
        if excess.size and excess.max() > NEST_TOL:
            lvl = int(np.argmax(excess.max(axis=1))) + 1
            raise NotNested(f"cut at alpha={self.alpha.levels[lvl]} is not contained in a lower cut")

    @property
    def dim(self) -> int:
        return self.cuts[0].dim

    def __len__(self):
        return len(self.cuts)

    def __repr__(self):
        return f"FuzzyVector(dim={self.dim}, L={len(self)})"

    def __eq__(self, other):
        if not isinstance(other, FuzzyVector):
            return NotImplemented
        return self.alpha == other.alpha and all(a == b for a, b in zip(self.cuts, other.cuts))

    __hash__ = None

    def isclose(self, other, tol=1e-9):
        return self.alpha == other.alpha and all(a.isclose(b, tol) for a, b in zip(self.cuts, other.cuts))

    def cut(self, alpha: float) -> Polytope:
        return self.cuts[self.alpha.index(alpha)]

    @classmethod
    def crisp(cls, point, alpha: AlphaGrid | None = None) -> "FuzzyVector":
        alpha = alpha or AlphaGrid.uniform()
        p = Polytope([np.asarray(point, dtype=np.float64)])
        return cls(alpha, [p] * len(alpha), validate=False)

    def membership(self, x) -> float:
        """Characterizing function: the largest level whose cut contains ``x``
        (0 when no cut does). Planar stacks only."""
        if self.dim != 2:
            raise NotImplementedError("membership is only evaluated for d = 2")
        x = np.asarray(x, dtype=np.float64)
        best = 0.0
        for level, cut in zip(self.alpha.levels, self.cuts):
            if _in_polygon(cut.vertices, x):
                best = float(level)
            else:
                break
        return best

    def to_json(self):
        return {"alpha": self.alpha.levels.tolist(), "cuts": [c.to_json() for c in self.cuts]}

    @classmethod
    def from_json(cls, obj):
        alpha = AlphaGrid(obj["alpha"])
        cuts = [Polytope.from_json(c) for c in obj["cuts"]]
        return cls(alpha, cuts)


def _in_polygon(v, x, tol=1e-9):
    h = len(v)
    if h == 1:
        return bool(np.linalg.norm(x - v[0]) <= tol)
    if h == 2:
        a, b = v
        t = np.clip(np.dot(x - a, b - a) / np.dot(b - a, b - a), 0.0, 1.0)
        return bool(np.linalg.norm(x - (a + t * (b - a))) <= tol)
    e = np.roll(v, -1, axis=0) - v
    w = x - v
    cross = e[:, 0] * w[:, 1] - e[:, 1] * w[:, 0]
    return bool(np.all(cross / np.linalg.norm(e, axis=1) >= -tol))


class SupportSurface:
    """L x M matrix of support values over (alpha grid x direction grid)."""

    __slots__ = ("alpha", "grid", "values")

    def __init__(self, alpha: AlphaGrid, grid: DirectionGrid, values, *, validate: bool = True):
        v = np.array(values, dtype=np.float64)
        if v.shape != (len(alpha), grid.size):
            raise ValueError(f"values of shape {v.shape}, expected {(len(alpha), grid.size)}")
        if validate:
            if not np.all(np.isfinite(v)):
                raise ValueError("support surface has non-finite entries")
            if v.shape[0] > 1 and np.max(np.diff(v, axis=0)) > NEST_TOL:
                raise NotNested("support surface increases with alpha")
        v.setflags(write=False)
        self.alpha = alpha
        self.grid = grid
        self.values = v

    def __repr__(self):
        return f"SupportSurface(L={len(self.alpha)}, M={self.grid.size})"

    def to_csv(self) -> str:
        """Header row of directions, then one row per alpha level."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha"] + [" ".join(repr(float(c)) for c in u) for u in self.grid.directions])
        for a, row in zip(self.alpha.levels, self.values):
            w.writerow([repr(float(a))] + [repr(float(x)) for x in row])
        return buf.getvalue()


def _same_grid(x: FuzzyVector, y: FuzzyVector):
    if x.dim != y.dim:
        raise DimensionMismatch(f"dimensions differ: {x.dim} vs {y.dim}")
    if x.alpha != y.alpha:
        raise GridMismatch("fuzzy vectors live on different alpha grids")


def support_surface(x: FuzzyVector, grid: DirectionGrid) -> SupportSurface:
    if grid.dim != x.dim:
        raise DimensionMismatch(f"{grid.dim}-d grid for a {x.dim}-d fuzzy vector")
    vals = np.stack([support_values(c, grid.directions) for c in x.cuts])
    return SupportSurface(x.alpha, grid, vals, validate=False)


def fuzzy_add(x: FuzzyVector, y: FuzzyVector) -> FuzzyVector:
    _same_grid(x, y)
    return FuzzyVector(x.alpha, [minkowski_sum(a, b) for a, b in zip(x.cuts, y.cuts)], validate=False)


def fuzzy_scale(lam: float, x: FuzzyVector) -> FuzzyVector:
    return FuzzyVector(x.alpha, [scale_set(lam, c) for c in x.cuts], validate=False)


def _level_distances(x, y, grid):
    _same_grid(x, y)
    if x.dim > 2 and grid is None:
        grid = DirectionGrid.uniform(x.dim, 1024)
    return np.array([hausdorff(a, b, grid) for a, b in zip(x.cuts, y.cuts)])


def dist_p(x: FuzzyVector, y: FuzzyVector, p: float = 2.0, grid: DirectionGrid | None = None) -> float:
    """L^p distance built from levelwise Hausdorff distances.

    ``grid`` only matters for d > 2, where levelwise Hausdorff distances are
    grid maxima.
    """
    if not (1.0 <= p < math.inf):
        raise ValueError("p must lie in [1, inf); use dist_inf for p = inf")
    h = _level_distances(x, y, grid)
    return float(np.sum(x.alpha.weights * h ** p) ** (1.0 / p))


def dist_inf(x: FuzzyVector, y: FuzzyVector, grid: DirectionGrid | None = None) -> float:
    return float(np.max(_level_distances(x, y, grid)))


def _same_surface_grid(s: SupportSurface, t: SupportSurface):
    if s.alpha != t.alpha or s.grid != t.grid:
        raise GridMismatch("support surfaces live on different grids")


def rho_p(s: SupportSurface, t: SupportSurface, p: float = 2.0) -> float:
    if not (1.0 <= p < math.inf):
        raise ValueError("p must lie in [1, inf); use rho_inf for p = inf")
    _same_surface_grid(s, t)
    w = np.outer(s.alpha.weights, s.grid.weights)
    return float(np.sum(w * np.abs(s.values - t.values) ** p) ** (1.0 / p))


def rho_inf(s: SupportSurface, t: SupportSurface) -> float:
    _same_surface_grid(s, t)
    return float(np.max(np.abs(s.values - t.values)))


def square_stack(alpha: AlphaGrid | None = None, center=(0.0, 0.0)) -> FuzzyVector:
    """Axis-aligned squares of side ``2 (1 - a/2)`` around ``center``."""
    alpha = alpha or AlphaGrid.uniform()
    c = np.asarray(center, dtype=np.float64)
    unit = np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
    cuts = [Polytope(c + (1.0 - a / 2.0) * unit) for a in alpha.levels]
    return FuzzyVector(alpha, cuts)


def shrinking_hull(points, alpha: AlphaGrid | None = None, profile=None) -> FuzzyVector:
    """Hull of ``points`` shrunk toward the point mean by ``g(a)`` at level ``a``.

    ``profile`` is either a callable ``g`` or a sequence of per-level factors;
    it must be non-increasing and positive. Defaults to ``g(a) = 1 - a/2``.
    """
    alpha = alpha or AlphaGrid.uniform()
    pts = np.asarray(points, dtype=np.float64)
    g = shrink_profile(profile, alpha)
    c = pts.mean(axis=0)
    return FuzzyVector(alpha, [Polytope(c + gl * (pts - c)) for gl in g], validate=False)


def shrink_profile(profile, alpha: AlphaGrid) -> np.ndarray:
    if profile is None:
        g = 1.0 - alpha.levels / 2.0
    elif callable(profile):
        g = np.array([float(profile(a)) for a in alpha.levels])
    else:
        g = np.array(profile, dtype=np.float64)
    if g.shape != (len(alpha),):
        raise ValueError(f"profile needs {len(alpha)} values, got shape {g.shape}")
    if not np.all(np.isfinite(g)) or np.any(g <= 0.0) or np.any(np.diff(g) > 0.0):
        raise ValueError("shrink profile must be positive and non-increasing")
    return g
