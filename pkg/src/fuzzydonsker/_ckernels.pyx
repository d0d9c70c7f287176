# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels. Signatures mirror ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, hypot

cnp.import_array()


cdef inline double _cross(const double[:, ::1] p, Py_ssize_t o, Py_ssize_t a, Py_ssize_t b) noexcept nogil:
    return ((p[a, 0] - p[o, 0]) * (p[b, 1] - p[o, 1])
            - (p[a, 1] - p[o, 1]) * (p[b, 0] - p[o, 0]))


cdef inline bint _drop(const double[:, ::1] p, Py_ssize_t o, Py_ssize_t a, Py_ssize_t b, double tol) noexcept nogil:
    # a leaves the chain unless it sits more than tol to the left of the line o -> b
    return _cross(p, o, a, b) <= tol * hypot(p[b, 0] - p[o, 0], p[b, 1] - p[o, 1])


def hull2d(points, double tol):
    arr = np.ascontiguousarray(points, dtype=np.float64)
    cdef const double[:, ::1] p = arr
    cdef Py_ssize_t n = p.shape[0]
    if n == 0:
        return np.empty(0, dtype=np.intp)
    cdef cnp.intp_t[::1] order = np.lexsort((arr[:, 1], arr[:, 0])).astype(np.intp)
    cdef cnp.intp_t[::1] chain = np.empty(2 * n + 2, dtype=np.intp)
    cdef Py_ssize_t k = 0, i, start, t
    cdef double eps = 1e-12

    for i in range(n):
        while k >= 2 and _drop(p, chain[k - 2], chain[k - 1], order[i], tol):
            k -= 1
        chain[k] = order[i]
        k += 1
    start = k
    for t in range(n - 1, -1, -1):
        i = order[t]
        while k - start >= 2 and _drop(p, chain[k - 2], chain[k - 1], i, tol):
            k -= 1
        chain[k] = i
        k += 1
    # lower[:-1] + upper[:-1]
    cdef list idx = []
    for t in range(start - 1):
        idx.append(chain[t])
    for t in range(start, k - 1):
        idx.append(chain[t])
    if not idx:
        idx = [order[0]]

    cdef list out = []
    cdef Py_ssize_t last, first
    for i in idx:
        if out:
            last = out[len(out) - 1]
            if fabs(p[i, 0] - p[last, 0]) <= eps and fabs(p[i, 1] - p[last, 1]) <= eps:
                continue
        out.append(i)
    while len(out) > 1:
        last = out[len(out) - 1]
        first = out[0]
        if fabs(p[last, 0] - p[first, 0]) <= eps and fabs(p[last, 1] - p[first, 1]) <= eps:
            out.pop()
        else:
            break
    return np.asarray(out, dtype=np.intp)


cdef void _support_max(const double[:, ::1] v, const double[:, ::1] u, double[::1] out) noexcept nogil:
    cdef Py_ssize_t m, i, j
    cdef Py_ssize_t nv = v.shape[0], nu = u.shape[0], d = v.shape[1]
    cdef double best, s
    for m in range(nu):
        best = 0.0
        for i in range(nv):
            s = 0.0
            for j in range(d):
                s += u[m, j] * v[i, j]
            if i == 0 or s > best:
                best = s
        out[m] = best


def support_max(vertices, directions):
    cdef const double[:, ::1] v = np.ascontiguousarray(vertices, dtype=np.float64)
    cdef const double[:, ::1] u = np.ascontiguousarray(directions, dtype=np.float64)
    out = np.empty(u.shape[0])
    cdef double[::1] o = out
    with nogil:
        _support_max(v, u, o)
    return out


cdef Py_ssize_t _fan_normals(const double[:, ::1] p, double[:, ::1] out, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t h = p.shape[0], i, nxt
    cdef double ex, ey
    if h < 2:
        return k
    if h == 2:
        ex = p[1, 0] - p[0, 0]
        ey = p[1, 1] - p[0, 1]
        out[k, 0] = ey
        out[k, 1] = -ex
        out[k + 1, 0] = -ey
        out[k + 1, 1] = ex
        return k + 2
    for i in range(h):
        nxt = i + 1 if i + 1 < h else 0
        ex = p[nxt, 0] - p[i, 0]
        ey = p[nxt, 1] - p[i, 1]
        out[k, 0] = ey
        out[k, 1] = -ex
        k += 1
    return k


def hausdorff2d(pa, qa):
    cdef const double[:, ::1] p = np.ascontiguousarray(pa, dtype=np.float64)
    cdef const double[:, ::1] q = np.ascontiguousarray(qa, dtype=np.float64)
    cdef Py_ssize_t n = p.shape[0], m = q.shape[0]
    cdef Py_ssize_t cap = 2 * n * m + n + m + 5
    cdef double[:, ::1] c = np.empty((cap, 2))
    cdef Py_ssize_t k = 0, i, j, a
    cdef double dx, dy, nrm, sp, sq, t, best = 0.0, g

    with nogil:
        k = _fan_normals(p, c, k)
        k = _fan_normals(q, c, k)
        for i in range(n):
            for j in range(m):
                dx = p[i, 0] - q[j, 0]
                dy = p[i, 1] - q[j, 1]
                c[k, 0] = dx
                c[k, 1] = dy
                c[k + 1, 0] = -dx
                c[k + 1, 1] = -dy
                k += 2
        c[k, 0] = 1.0
        c[k, 1] = 0.0
        k += 1
        for a in range(k):
            nrm = hypot(c[a, 0], c[a, 1])
            if nrm <= 0.0:
                continue
            dx = c[a, 0] / nrm
            dy = c[a, 1] / nrm
            sp = dx * p[0, 0] + dy * p[0, 1]
            for i in range(1, n):
                t = dx * p[i, 0] + dy * p[i, 1]
                if t > sp:
                    sp = t
            sq = dx * q[0, 0] + dy * q[0, 1]
            for j in range(1, m):
                t = dx * q[j, 0] + dy * q[j, 1]
                if t > sq:
                    sq = t
            g = fabs(sp - sq)
            if g > best:
                best = g
    return float(best)


cdef Py_ssize_t _clip_once(const double[:, ::1] cur, Py_ssize_t k, double nx, double ny,
                           double fv, double tol, double[:, ::1] nxt) noexcept nogil:
    cdef Py_ssize_t kn = 0, i, ip
    cdef double px, py, qx, qy, dp, dq, s
    cdef bint p_in, q_in
    for i in range(k):
        ip = i + 1 if i + 1 < k else 0
        px = cur[i, 0]
        py = cur[i, 1]
        qx = cur[ip, 0]
        qy = cur[ip, 1]
        dp = nx * px + ny * py - fv
        dq = nx * qx + ny * qy - fv
        p_in = dp <= tol
        q_in = dq <= tol
        if p_in:
            nxt[kn, 0] = px
            nxt[kn, 1] = py
            kn += 1
        if p_in != q_in:
            s = dp / (dp - dq)
            nxt[kn, 0] = px + s * (qx - px)
            nxt[kn, 1] = py + s * (qy - py)
            kn += 1
    return kn


def clip_halfplanes(normals, values, double bound, double tol):
    cdef const double[:, ::1] nrm = np.ascontiguousarray(normals, dtype=np.float64)
    cdef const double[::1] f = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t c, k = 4
    cur = np.array([[-bound, -bound], [bound, -bound], [bound, bound], [-bound, bound]])
    for c in range(nrm.shape[0]):
        if k == 0:
            break
        # each edge emits at most two points
        nxt = np.empty((2 * k, 2))
        k = _clip_once(cur, k, nrm[c, 0], nrm[c, 1], f[c], tol, nxt)
        cur = nxt
    return np.array(cur[:k], dtype=np.float64).reshape(-1, 2)


def accumulate_paths(centered, floors, fracs):
    cdef const double[:, ::1] c = np.ascontiguousarray(centered, dtype=np.float64)
    cdef const cnp.intp_t[::1] fl = np.ascontiguousarray(floors, dtype=np.intp)
    cdef const double[::1] fr = np.ascontiguousarray(fracs, dtype=np.float64)
    cdef Py_ssize_t rows = c.shape[0], k = fl.shape[0], r, i, j, m
    out = np.empty((rows, k))
    cdef double[:, ::1] o = out
    cdef double acc, val
    with nogil:
        for r in range(rows):
            acc = 0.0
            j = 0
            for i in range(k):
                m = fl[i]
                while j < m:
                    acc = acc + c[r, j]
                    j += 1
                val = acc
                if fr[i] != 0.0:
                    val = acc + fr[i] * c[r, m]
                o[r, i] = val
    return out
