"""Pure-Python implementations of the numerical kernels.

Used when the compiled extension is unavailable or when
``FUZZYDONSKER_PURE_PYTHON=1`` is set. Every function here has a
counterpart with the same signature in ``_ckernels.pyx``.
"""

import math

import numpy as np


def hull2d(points, tol):
    """Indices of the convex hull of planar points.

    Andrew's monotone chain. A middle point is dropped when it lies less
    than ``tol`` to the left of the chord joining its neighbours, so
    duplicates and collinear boundary points disappear. Measuring a distance
    rather than the raw cross product keeps near-duplicate points from
    knocking out genuine vertices.

    Parameters
    ----------
    points : array, shape (n, 2)
    tol : float
        Distance threshold below which a turn counts as straight.

    Returns
    -------
    idx : int array
        Hull vertex indices, counterclockwise, starting from the
        lexicographically smallest point.
    """
    pts = np.asarray(points, dtype=np.float64)
    n = pts.shape[0]
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    xs = pts[:, 0].tolist()
    ys = pts[:, 1].tolist()

    def drop(o, a, b):
        cross = (xs[a] - xs[o]) * (ys[b] - ys[o]) - (ys[a] - ys[o]) * (xs[b] - xs[o])
        return cross <= tol * math.hypot(xs[b] - xs[o], ys[b] - ys[o])

    lower = []
    for i in order.tolist():
        while len(lower) >= 2 and drop(lower[-2], lower[-1], i):
            lower.pop()
        lower.append(i)
    upper = []
    for i in order[::-1].tolist():
        while len(upper) >= 2 and drop(upper[-2], upper[-1], i):
            upper.pop()
        upper.append(i)
    chain = lower[:-1] + upper[:-1]
    if not chain:
        chain = [int(order[0])] if n else []

    # collapse near-coincident neighbours, cyclically
    eps = 1e-12
    out = []
    for i in chain:
        if out and abs(xs[i] - xs[out[-1]]) <= eps and abs(ys[i] - ys[out[-1]]) <= eps:
            continue
        out.append(i)
    while len(out) > 1 and abs(xs[out[-1]] - xs[out[0]]) <= eps and abs(ys[out[-1]] - ys[out[0]]) <= eps:
        out.pop()
    return np.asarray(out, dtype=np.intp)


def support_max(vertices, directions):
    """Row-wise maximum of ``vertices @ directions.T``, one value per direction."""
    v = np.asarray(vertices, dtype=np.float64)
    u = np.asarray(directions, dtype=np.float64)
    return (u @ v.T).max(axis=1)


def _fan_normals(poly):
    # outward edge normals of a canonical CCW polygon (unnormalized)
    h = poly.shape[0]
    if h < 2:
        return np.empty((0, 2))
    edges = np.roll(poly, -1, axis=0) - poly
    if h == 2:
        edges = edges[:1]
        normals = np.stack([edges[:, 1], -edges[:, 0]], axis=1)
        return np.vstack([normals, -normals])
    return np.stack([edges[:, 1], -edges[:, 0]], axis=1)


def hausdorff2d(p, q):
    """Exact Hausdorff distance between two canonical planar polytopes.

    On every arc of the merged normal fan the support difference is a
    linear functional ``<u, v_i - w_j>``, so its absolute maximum sits at an
    arc endpoint (an edge normal of either polygon) or at ``±(v_i - w_j)``.
    Evaluating at all of those candidates gives the sup over the circle.
    """
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    diffs = (p[:, None, :] - q[None, :, :]).reshape(-1, 2)
    cands = np.vstack([_fan_normals(p), _fan_normals(q), diffs, -diffs, [[1.0, 0.0]]])
    norms = np.hypot(cands[:, 0], cands[:, 1])
    cands = cands[norms > 0] / norms[norms > 0, None]
    gap = np.abs(support_max(p, cands) - support_max(q, cands))
    return float(gap.max())


def clip_halfplanes(normals, values, bound, tol):
    """Intersect half-planes ``<n_m, x> <= f_m`` inside the box ``[-bound, bound]^2``.

    Sutherland-Hodgman clipping of the box against each constraint in turn.
    Returns the (possibly degenerate, possibly repeated) polygon vertices; an
    empty array means the constraints are inconsistent.
    """
    poly = [(-bound, -bound), (bound, -bound), (bound, bound), (-bound, bound)]
    normals = np.asarray(normals, dtype=np.float64).tolist()
    values = np.asarray(values, dtype=np.float64).tolist()
    for (nx, ny), f in zip(normals, values):
        if not poly:
            break
        out = []
        k = len(poly)
        for i in range(k):
            px, py = poly[i]
            qx, qy = poly[(i + 1) % k]
            dp = nx * px + ny * py - f
            dq = nx * qx + ny * qy - f
            p_in = dp <= tol
            q_in = dq <= tol
            if p_in:
                out.append((px, py))
            if p_in != q_in:
                s = dp / (dp - dq)
                out.append((px + s * (qx - px), py + s * (qy - py)))
        poly = out
    return np.asarray(poly, dtype=np.float64).reshape(-1, 2)


def accumulate_paths(centered, floors, fracs):
    """Interpolated partial sums of each row at the requested times.

    ``out[r, i] = sum(centered[r, :floors[i]]) + fracs[i] * centered[r, floors[i]]``,
    where the fractional term is skipped when ``fracs[i] == 0``. ``floors``
    must be non-decreasing.
    """
    c = np.asarray(centered, dtype=np.float64)
    floors = np.asarray(floors, dtype=np.intp)
    fracs = np.asarray(fracs, dtype=np.float64)
    rows = c.shape[0]
    out = np.empty((rows, floors.shape[0]))
    for r in range(rows):
        row = c[r].tolist()
        acc = 0.0
        j = 0
        for i in range(floors.shape[0]):
            m = int(floors[i])
            while j < m:
                acc += row[j]
                j += 1
            val = acc
            if fracs[i] != 0.0:
                val = acc + fracs[i] * row[m]
            out[r, i] = val
    return out

