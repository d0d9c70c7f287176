"""Shared generators, independent oracles and the acceptance summary hook."""


import numpy as np
import pytest
from scipy.spatial import ConvexHull

from fuzzydonsker import AlphaGrid, FuzzyVector, Polytope

ACCEPTANCE_LINES = []


def random_polygon(rng, k=None, scale=1.0, shift=None):
    k = int(rng.integers(1, 9)) if k is None else k
    pts = scale * rng.standard_normal((k, 2))
    if shift is not None:
        pts = pts + shift
    return Polytope(pts)


def random_fuzzy(rng, levels=5):
    """Shrinking stack around a random point cloud, exactly nested."""
    alpha = AlphaGrid.uniform(levels)
    pts = rng.standard_normal((int(rng.integers(3, 8)), 2)) + rng.uniform(-2, 2, 2)
    c = pts.mean(axis=0)
    g = 1.0 - 0.9 * alpha.levels
    return FuzzyVector(alpha, [Polytope(c + gl * (pts - c)) for gl in g], validate=False)


# ------------------------------------------------------------- oracles

def brute_support(vertices, u):
    return max(float(np.dot(v, u)) for v in vertices)


def _point_segment(x, a, b):
    ab = b - a
    denom = float(ab @ ab)
    s = 0.0 if denom == 0 else min(1.0, max(0.0, float((x - a) @ ab) / denom))
    return float(np.linalg.norm(x - (a + s * ab)))


def point_polygon_distance(x, v):
    """Euclidean distance from ``x`` to a convex polygon given by ccw vertices."""
    k = len(v)
    if k == 1:
        return float(np.linalg.norm(x - v[0]))
    if k == 2:
        return _point_segment(x, v[0], v[1])
    inside = all((v[(i + 1) % k][0] - v[i][0]) * (x[1] - v[i][1])
                 - (v[(i + 1) % k][1] - v[i][1]) * (x[0] - v[i][0]) >= 0 for i in range(k))
    if inside:
        return 0.0
    return min(_point_segment(x, v[i], v[(i + 1) % k]) for i in range(k))


def brute_hausdorff(p, q):
    """Max of directed vertex-to-set distances (attained at vertices for convex sets)."""
    a = max(point_polygon_distance(x, q.vertices) for x in p.vertices)
    b = max(point_polygon_distance(x, p.vertices) for x in q.vertices)
    return max(a, b)


def qhull_vertices(points):
    """Vertex set of the hull via qhull, for comparison with the package hull."""
    pts = np.asarray(points, dtype=np.float64)
    try:
        h = ConvexHull(pts)
    except Exception:
        return None
    return pts[h.vertices]


def same_point_set(a, b, tol):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    return all(np.min(np.max(np.abs(b - x), axis=1)) <= tol for x in a)


def brute_halfplane_polygon(u, f, tol=1e-9):
    """Intersection of half-planes by enumerating pairwise line intersections."""
    cand = []
    m = len(f)
    for i in range(m):
        for j in range(i + 1, m):
            a = np.array([u[i], u[j]])
            if abs(np.linalg.det(a)) < 1e-12:
                continue
            x = np.linalg.solve(a, [f[i], f[j]])
            if np.all(u @ x <= f + tol):
                cand.append(x)
    return np.array(cand)


def record(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
