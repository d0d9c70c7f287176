import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import (
    brute_halfplane_polygon,
    brute_hausdorff,
    brute_support,
    qhull_vertices,
    random_polygon,
    same_point_set,
)
from fuzzydonsker import (
    DirectionGrid,
    HalfspaceOracle,
    Polytope,
    contains,
    hausdorff,
    minkowski_sum,
    reconstruct_2d,
    scale_set,
    support_value,
    support_values,
)
from fuzzydonsker.convex import canonicalize, origin
from fuzzydonsker.errors import (
    DimensionMismatch,
    EmptyInput,
    EmptyIntersection,
    UnboundedIntersection,
)

coords = st.floats(-100, 100, allow_nan=False, allow_infinity=False)
point_clouds = arrays(np.float64, st.tuples(st.integers(1, 12), st.just(2)), elements=coords)


# ------------------------------------------------------------ canonical form

def test_hull_matches_qhull(rng):
    for _ in range(200):
        pts = rng.standard_normal((int(rng.integers(3, 25)), 2))
        ref = qhull_vertices(pts)
        assert same_point_set(Polytope(pts).vertices, ref, 1e-12)


def test_canonical_order_is_ccw_from_lexmin(rng):
    p = Polytope(rng.standard_normal((20, 2)))
    v = p.vertices
    assert tuple(v[0]) == min(map(tuple, v))
    e = np.roll(v, -1, axis=0) - v
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    assert np.all(cross > 0)


def test_square_with_interior_and_edge_points():
    pts = [[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0], [1, 1], [0, 0]]
    assert Polytope(pts).vertices.tolist() == [[0, 0], [1, 0], [1, 1], [0, 1]]


def test_near_duplicate_does_not_eat_a_vertex():
    # D sits ~1e-16 from A; an area-based collinearity test used to drop B
    a, b, d = [1.0 + 2.2e-16, 0.0], [1.0, 1.0], [1.0, 1e-16]
    p = Polytope([[0, 0], a, b, [0, 1], d])
    assert any(np.array_equal(v, b) for v in p.vertices)
    assert len(p) == 4


def test_degenerate_shapes():
    assert len(Polytope([[1, 2], [1, 2]])) == 1
    seg = Polytope([[0, 0], [2, 2], [1, 1]])
    assert seg.vertices.tolist() == [[0, 0], [2, 2]]


def test_canonical_form_is_order_invariant(rng):
    pts = rng.standard_normal((12, 2))
    assert Polytope(pts) == Polytope(pts[rng.permutation(12)])


@settings(max_examples=150, deadline=None)
@given(point_clouds)
def test_canonicalize_idempotent(pts):
    p = canonicalize(pts)
    assert canonicalize(p.vertices) == p


def test_empty_and_bad_input():
    with pytest.raises(EmptyInput):
        Polytope(np.empty((0, 2)))
    with pytest.raises(ValueError):
        Polytope([[0.0, math.nan]])
    with pytest.raises(DimensionMismatch):
        Polytope([[1.0]])


def test_three_dim_hull_and_flat_input(rng):
    pts = rng.standard_normal((40, 3))
    ref = qhull_vertices(pts)
    assert same_point_set(Polytope(pts).vertices, ref, 1e-12)
    flat = np.column_stack([rng.standard_normal((10, 2)), np.zeros(10)])
    p = Polytope(flat)
    assert same_point_set(p.vertices[:, :2], qhull_vertices(flat[:, :2]), 1e-9)


def test_json_round_trip(rng):
    p = random_polygon(rng, 7)
    assert Polytope.from_json(p.to_json()) == p
    with pytest.raises(DimensionMismatch):
        Polytope.from_json({"dim": 3, "vertices": p.vertices.tolist()})


# ------------------------------------------------------------ support

def test_support_against_brute_force(rng):
    for _ in range(100):
        p = Polytope(rng.standard_normal((int(rng.integers(1, 10)), 3)))
        u = rng.standard_normal(3)
        assert support_value(p, u) == pytest.approx(brute_support(p.vertices, u), abs=1e-12)


def test_support_of_unit_square():
    sq = Polytope([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    assert support_value(sq, [1, 0]) == 1.0
    assert support_value(sq, np.array([1, 1]) / math.sqrt(2)) == pytest.approx(math.sqrt(2), abs=1e-15)


def test_support_dimension_check():
    with pytest.raises(DimensionMismatch):
        support_values(origin(2), np.ones((3, 3)))


# ------------------------------------------------------------ arithmetic

def test_minkowski_matches_pairwise_hull(rng):
    for _ in range(100):
        p, q = random_polygon(rng, 5), random_polygon(rng, 4)
        s = minkowski_sum(p, q)
        pairs = (p.vertices[:, None, :] + q.vertices[None, :, :]).reshape(-1, 2)
        assert same_point_set(s.vertices, qhull_vertices(pairs), 1e-12)


def test_minkowski_identity_and_dims(rng):
    p = random_polygon(rng, 6)
    assert minkowski_sum(p, origin(2)) == p
    with pytest.raises(DimensionMismatch):
        minkowski_sum(p, origin(3))


def test_scale_set(rng):
    p = random_polygon(rng, 6)
    assert scale_set(0.0, p) == origin(2)
    assert scale_set(2.0, p).isclose(Polytope(2.0 * p.vertices), 0.0)
    flipped = scale_set(-1.0, p)
    u = rng.standard_normal(2)
    assert support_value(flipped, u) == pytest.approx(support_value(p, -u), abs=1e-12)


# ------------------------------------------------------------ grids and oracle

def test_direction_grids():
    for d, m in ((2, 16), (3, 50), (5, 64)):
        g = DirectionGrid.uniform(d, m)
        assert g.directions.shape == (m, d)
        assert np.allclose(np.linalg.norm(g.directions, axis=1), 1.0, atol=1e-15)
        assert g.weights.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        DirectionGrid.uniform(2, 3)
    g = DirectionGrid.uniform(2, 8).augmented([[3.0, 4.0]])
    assert g.size == 9 and np.allclose(g.directions[-1], [0.6, 0.8])


def test_halfspace_oracle(rng):
    p = random_polygon(rng, 8)
    orc = HalfspaceOracle.of(p, DirectionGrid.uniform(2, 64))
    for v in p.vertices:
        assert contains(orc, v)
    assert contains(orc, p.centroid)
    far = p.centroid + 10 * (p.vertices[0] - p.centroid) + 1.0
    assert not orc.contains(far)


# ------------------------------------------------------------ Hausdorff

def test_hausdorff_against_point_distance_oracle(rng):
    for _ in range(300):
        p, q = random_polygon(rng), random_polygon(rng, shift=rng.uniform(-1, 1, 2))
        assert hausdorff(p, q) == pytest.approx(brute_hausdorff(p, q), abs=1e-12)


def test_hausdorff_translate_is_shift_length(rng):
    p = random_polygon(rng, 6)
    v = np.array([3.0, 4.0])
    assert hausdorff(p, p.translate(v)) == pytest.approx(5.0, abs=1e-12)


def test_hausdorff_point_and_disjoint_segments():
    a = Polytope([[0, 0]])
    b = Polytope([[3, 4]])
    assert hausdorff(a, b) == 5.0
    s = Polytope([[0, 0], [2, 0]])
    t = Polytope([[0, 1], [2, 1]])
    assert hausdorff(s, t) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=100, deadline=None)
@given(point_clouds, point_clouds)
def test_hausdorff_is_metric_like(a, b):
    p, q = canonicalize(a), canonicalize(b)
    d = hausdorff(p, q)
    assert d >= 0
    assert d == pytest.approx(hausdorff(q, p), abs=1e-9)
    assert hausdorff(p, p) == 0.0


def test_hausdorff_three_dim_grid_lower_bound(rng):
    p = Polytope(rng.standard_normal((8, 3)))
    q = p.translate([0.0, 0.0, 2.0])
    coarse = hausdorff(p, q, DirectionGrid.uniform(3, 20))
    fine = hausdorff(p, q, DirectionGrid.uniform(3, 2000))
    assert coarse <= fine + 1e-12 <= 2.0 + 1e-12
    assert fine > 1.99
    with pytest.raises(ValueError):
        hausdorff(p, q)


# ------------------------------------------------------------ reconstruction

def test_reconstruction_round_trip(rng):
    g = DirectionGrid.uniform(2, 32)
    for _ in range(200):
        p = random_polygon(rng, int(rng.integers(3, 9)))
        f = support_values(p, g.directions)
        r = reconstruct_2d(g, f)
        ref = brute_halfplane_polygon(g.directions, f)
        # compared as sets: near-parallel line pairs make the oracle's vertex list noisy
        assert brute_hausdorff(r, Polytope(ref)) <= 1e-7
        # the circumscribed polygon has the same support values on the grid
        assert np.allclose(support_values(r, g.directions), f, atol=1e-9)


def test_reconstruction_exact_when_normals_contain_edge_normals():
    sq = Polytope([[0, 0], [2, 0], [2, 1], [0, 1]])
    g = DirectionGrid.uniform(2, 4)
    assert reconstruct_2d(g, support_values(sq, g.directions)).isclose(sq, 1e-12)


def test_reconstruction_degenerate_point():
    g = DirectionGrid.uniform(2, 12)
    pt = Polytope([[1.5, -2.0]])
    assert reconstruct_2d(g, support_values(pt, g.directions)).isclose(pt, 1e-8)


def test_reconstruction_errors():
    g = DirectionGrid.uniform(2, 8)
    f = np.full(8, -1.0)
    with pytest.raises(EmptyIntersection):
        reconstruct_2d(g, f)
    half = np.array([[1, 0], [0, 1], [math.sqrt(0.5), math.sqrt(0.5)]])
    with pytest.raises(UnboundedIntersection):
        reconstruct_2d(half, [1.0, 1.0, 1.0])


def test_support_subadditivity(rng):
    for _ in range(200):
        p = random_polygon(rng)
        u, v = rng.standard_normal(2), rng.standard_normal(2)
        assert support_value(p, u + v) <= support_value(p, u) + support_value(p, v) + 1e-12
