"""Acceptance criteria 1-6.

Each test prints one ``criterion k: PASS|FAIL`` line; the lines are
repeated in the pytest terminal summary. Thresholds and tolerances are
pinned here and must not be loosened.
"""

import json
import math
import time

import numpy as np
import pytest

from conftest import brute_halfplane_polygon, brute_hausdorff, random_fuzzy, random_polygon, record
from fuzzydonsker import (
    ACCEPTANCE_SEED,
    AlphaGrid,
    DirectionGrid,
    FuzzyVector,
    PerturbationSpec,
    Polytope,
    RngStream,
    ScalingSpec,
    TranslationSpec,
    acceptance_config,
    dist_inf,
    dist_p,
    estimate_moments,
    fuzzy_add,
    fuzzy_scale,
    hausdorff,
    minkowski_sum,
    reconstruct_2d,
    rho_inf,
    rho_p,
    run_fdd,
    run_null,
    scale_set,
    square_stack,
    support_surface,
    support_value,
    support_values,
)
from fuzzydonsker.cli import EXIT_OK, main
from fuzzydonsker.harness import ks_trend
from fuzzydonsker.randomness import moments_from_surfaces

CASES = 200
TOL_ADD = 1e-9        # support additivity, scaling, embedding linearity
TOL_MONO = 1e-9       # alpha-monotonicity
TOL_ID = 1e-12        # identity of indiscernibles
TOL_TRI = 1e-9        # triangle inequality
TOL_HAUS = 1e-12      # exact 2D Hausdorff vs point-distance oracle
TOL_RT = 1e-9         # reconstruction round trip

T = 1.0               # pinned time for the trend check
TREND_NS = (25, 100, 400)
TREND_SEEDS = tuple(ACCEPTANCE_SEED + i for i in range(11))


# ----------------------------------------------------------------- 1

def _identity_suite(rng):
    fails = {}

    def fail(name):
        fails[name] = fails.get(name, 0) + 1

    grid = DirectionGrid.uniform(2, 64)
    for _ in range(CASES):
        p, q = random_polygon(rng), random_polygon(rng)
        u = rng.standard_normal(2)
        if abs(support_value(minkowski_sum(p, q), u) - support_value(p, u) - support_value(q, u)) > TOL_ADD:
            fail("support additivity")

        lam = float(rng.uniform(-3, 3))
        scale = 1.0 + abs(lam) * np.max(np.abs(p.vertices))
        want = abs(lam) * support_value(p, u if lam >= 0 else -u)
        if abs(support_value(scale_set(lam, p), u) - want) > TOL_ADD * scale:
            fail("scaling law")

        x, y = random_fuzzy(rng), random_fuzzy(rng)
        a, b = float(rng.uniform(0, 3)), float(rng.uniform(0, 3))
        lhs = support_surface(fuzzy_add(fuzzy_scale(a, x), fuzzy_scale(b, y)), grid).values
        rhs = a * support_surface(x, grid).values + b * support_surface(y, grid).values
        if np.max(np.abs(lhs - rhs)) > TOL_ADD:
            fail("embedding positive linearity")

        if np.max(np.diff(support_surface(x, grid).values, axis=0)) > TOL_MONO:
            fail("alpha-monotonicity")

        z = random_fuzzy(rng)
        sx, sy, sz = (support_surface(v, grid) for v in (x, y, z))
        metrics = [
            lambda s, t: dist_p(s, t, 1.0), lambda s, t: dist_p(s, t, 2.0), dist_inf,
        ]
        surf_metrics = [lambda s, t: rho_p(s, t, 1.0), lambda s, t: rho_p(s, t, 2.0), rho_inf]
        for d, (f, g, h) in [(m, (x, y, z)) for m in metrics] + [(m, (sx, sy, sz)) for m in surf_metrics]:
            if d(f, g) != d(g, f) or d(f, f) > TOL_ID or d(f, h) > d(f, g) + d(g, h) + TOL_TRI:
                fail("metric axioms")
        if dist_inf(x, y) <= TOL_ID:
            fail("metric axioms")

        if abs(hausdorff(p, q) - brute_hausdorff(p, q)) > TOL_HAUS:
            fail("hausdorff-support identity")

        r = random_polygon(rng, int(rng.integers(1, 9)))
        normals = []
        v = r.vertices
        if len(v) >= 2:
            e = np.roll(v, -1, axis=0) - v
            normals = np.stack([e[:, 1], -e[:, 0]], axis=1)
            normals = normals[np.linalg.norm(normals, axis=1) > 0]
        g = DirectionGrid.uniform(2, 16).augmented(normals) if len(normals) else DirectionGrid.uniform(2, 16)
        rec = reconstruct_2d(g, support_values(r, g.directions))
        if hausdorff(rec, r) > TOL_RT:
            fail("reconstruction round trip")
    return fails


def test_criterion_1_identities():
    rng = np.random.default_rng(ACCEPTANCE_SEED)
    t0 = time.perf_counter()
    fails = _identity_suite(rng)
    elapsed = time.perf_counter() - t0
    ok = not fails and elapsed < 10.0
    record(1, ok, f"{CASES} cases x 7 identities, failures={fails or 0}, {elapsed:.1f}s (< 10s)")
    assert not fails
    assert elapsed < 10.0


# ----------------------------------------------------------------- 2

def test_criterion_2_moments():
    t0 = time.perf_counter()
    spec = TranslationSpec(square_stack(AlphaGrid.uniform(10)), sigma=1.0)
    grid = DirectionGrid.uniform(2, 64)
    est = estimate_moments(spec, grid, 4000, RngStream(ACCEPTANCE_SEED))
    var_ok = 0.9 <= est.frechet_variance <= 1.1

    # positive linearity of the estimator on shared draws, through Minkowski arithmetic
    lam, mu = 0.7, 1.9
    sx = ScalingSpec(square_stack(AlphaGrid.uniform(10)), 0.5, 1.5)
    sy = TranslationSpec(square_stack(AlphaGrid.uniform(10), center=(1.0, -2.0)), sigma=0.5)
    gx, gy = RngStream(ACCEPTANCE_SEED, 1).generator(), RngStream(ACCEPTANCE_SEED, 2).generator()
    px, py = sx.draw(gx, 4000), sy.draw(gy, 4000)
    comb = [support_surface(fuzzy_add(fuzzy_scale(lam, sx.realize(a)), fuzzy_scale(mu, sy.realize(b))), grid).values
            for a, b in zip(px, py)]
    m_comb = moments_from_surfaces(sx.alpha, grid, comb).mean_surface.values
    m_x = moments_from_surfaces(sx.alpha, grid, sx.surfaces(px, grid)).mean_surface.values
    m_y = moments_from_surfaces(sy.alpha, grid, sy.surfaces(py, grid)).mean_surface.values
    lin_err = float(np.max(np.abs(m_comb - (lam * m_x + mu * m_y))))
    elapsed = time.perf_counter() - t0
    ok = var_ok and lin_err <= 1e-9 and elapsed < 10.0
    record(2, ok, f"frechet variance {est.frechet_variance:.4f} in [0.9, 1.1], "
                  f"linearity error {lin_err:.2e} <= 1e-9, {elapsed:.1f}s (< 10s)")
    assert var_ok
    assert lin_err <= 1e-9
    assert elapsed < 10.0


# ----------------------------------------------------------------- 3

def test_criterion_3_donsker_battery():
    t0 = time.perf_counter()
    rep = run_fdd(acceptance_config(), 2000, ACCEPTANCE_SEED, workers=1)
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"{c['name']}={c['value']:.4f}/{c['limit']}" for c in rep.checks)
    record(3, rep.passed and elapsed < 60.0, f"seed {ACCEPTANCE_SEED}: {detail}, {elapsed:.1f}s (< 60s)")
    names = [c["name"] for c in rep.checks]
    assert names == ["ks@0.5", "ks@1.0", "covariance", "increment_corr", "ecf@(0.5,1.0)", "chebyshev@(0.6,0.5)"]
    for c in rep.checks:
        assert c["pass"], c
    assert elapsed < 60.0


# ----------------------------------------------------------------- 4

def test_criterion_4_null_calibration():
    t0 = time.perf_counter()
    rep = run_null((0.5, 1.0), 2000, ACCEPTANCE_SEED, 400)
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"{c['name']}={c['value']:.4f}/{c['limit']}" for c in rep.checks)
    record(4, rep.passed and elapsed < 5.0, f"{detail}, {elapsed:.1f}s (< 5s)")
    assert rep.passed
    assert elapsed < 5.0


# ----------------------------------------------------------------- 5

@pytest.mark.slow
def test_criterion_5_ks_trend():
    t0 = time.perf_counter()
    med = ks_trend(lambda n: acceptance_config(n=n), TREND_NS, TREND_SEEDS, 2000, t=T)
    elapsed = time.perf_counter() - t0
    vals = [med[n] for n in TREND_NS]
    monotone = all(a >= b for a, b in zip(vals, vals[1:]))
    shown = ", ".join(f"n={n}: {med[n]:.5f}" for n in TREND_NS)
    record(5, monotone and elapsed < 300.0, f"median KS at t=1 over 11 seeds: {shown}; "
                                            f"non-increasing={monotone}, {elapsed:.1f}s (< 300s)")
    assert elapsed < 300.0
    assert monotone, f"median KS is not non-increasing in n: {shown}"


# ----------------------------------------------------------------- 6

def test_criterion_6_determinism(tmp_path, monkeypatch):
    monkeypatch.delenv("FD_SEED", raising=False)
    outs = []
    for i, workers in enumerate((1, 1, 3)):
        out = tmp_path / f"r{i}.json"
        assert main(["verify", "--seed", str(ACCEPTANCE_SEED), "--workers", str(workers), "--out", str(out)]) == EXIT_OK
        outs.append(out.read_bytes())
    same_runs = outs[0] == outs[1]
    same_workers = outs[0] == outs[2]
    json.loads(outs[0])
    record(6, same_runs and same_workers, f"repeat identical={same_runs}, workers 1 vs 3 identical={same_workers}")
    assert same_runs
    assert same_workers
