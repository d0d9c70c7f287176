"""Command-line front end.

Subcommands: ``gen``, ``metrics``, ``estimate``, ``walk`` and ``verify``.
Exit status is 0 on success, 2 when ``verify`` finds a threshold failure
and 1 on any execution error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

import numpy as np
from scipy.special import ndtr

from . import schemas
from .convex import DirectionGrid
from .errors import FuzzyDonskerError, InvalidConfig
from .fuzzy import (
    AlphaGrid,
    FuzzyVector,
    dist_inf,
    dist_p,
    rho_inf,
    rho_p,
    shrinking_hull,
    square_stack,
    support_surface,
)
from .harness import ACCEPTANCE_SEED, DEFAULT_CHEBYSHEV, acceptance_config, run_fdd, simulate
from .randomness import RngStream, SamplerSpec, estimate_moments
from .walk import WalkConfig, resolve_normalization

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_THRESHOLD = 2


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load_json(path, schema, what):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path}: not valid JSON ({exc})") from exc
    return schemas.validate(obj, schema, what)


def _vector(text, name):
    try:
        v = [float(c) for c in text.split(",")]
    except ValueError as exc:
        raise InvalidConfig(f"{name}: expected comma-separated numbers, got {text!r}") from exc
    if len(v) < 2:
        raise InvalidConfig(f"{name}: need at least two coordinates")
    return v


def _alpha(levels):
    if levels < 1:
        raise InvalidConfig(f"need at least one alpha level, got {levels}")
    return AlphaGrid.uniform(levels)


def _seed(args, default=None):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FD_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidConfig(f"FD_SEED must be an integer, got {env!r}") from exc
    if default is None:
        raise InvalidConfig("no seed given: pass --seed or set FD_SEED")
    return default


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


# ---------------------------------------------------------------- gen

def cmd_gen(args) -> int:
    alpha = _alpha(args.levels)
    if args.shape == "crisp":
        x = FuzzyVector.crisp(_vector(args.at, "--at"), alpha)
    elif args.shape == "square-stack":
        x = square_stack(alpha, _vector(args.center, "--center"))
    else:
        if args.points:
            pts = [_vector(p, "--points") for p in args.points.split(";")]
        else:
            gen = RngStream(_seed(args, 0), 0).generator()
            pts = gen.standard_normal((args.vertices, 2))
        try:
            x = shrinking_hull(pts, alpha)
        except ValueError as exc:
            raise InvalidConfig(str(exc)) from exc
    obj = x.to_json()
    schemas.validate(obj, schemas.FUZZY_VECTOR, "fuzzy vector")
    _emit(_dump(obj), args.out)
    return EXIT_OK


# ------------------------------------------------------------ metrics

def metric_rows(x: FuzzyVector, y: FuzzyVector, p: float, sizes) -> list:
    """Distances for each direction-grid size ``M``."""
    rows = []
    for m in sizes:
        grid = DirectionGrid.uniform(x.dim, m)
        dgrid = grid if x.dim > 2 else None
        sx, sy = support_surface(x, grid), support_surface(y, grid)
        dp, di = dist_p(x, y, p, dgrid), dist_inf(x, y, dgrid)
        rp, ri = rho_p(sx, sy, p), rho_inf(sx, sy)
        rows.append({"M": m, "p": p, "dist_p": dp, "dist_inf": di, "rho_p": rp, "rho_inf": ri,
                     "gap_p": abs(dp - rp), "gap_inf": abs(di - ri)})
    return rows


def cmd_metrics(args) -> int:
    x = FuzzyVector.from_json(_load_json(args.file_a, schemas.FUZZY_VECTOR, "fuzzy vector"))
    y = FuzzyVector.from_json(_load_json(args.file_b, schemas.FUZZY_VECTOR, "fuzzy vector"))
    rows = metric_rows(x, y, args.p, args.M)
    if args.format == "csv":
        keys = list(rows[0])
        _emit(_csv(keys, [[r[k] for k in keys] for r in rows]), args.out)
    else:
        _emit(_dump(rows), args.out)
    return EXIT_OK


# ----------------------------------------------------------- estimate

def cmd_estimate(args) -> int:
    spec = SamplerSpec.from_json(_load_json(args.spec, schemas.SAMPLER_SPEC, "sampler spec"))
    grid = DirectionGrid.uniform(spec.dim, args.M)
    est = estimate_moments(spec, grid, args.R, RngStream(_seed(args), 0))
    if args.format == "csv":
        _emit(est.mean_surface.to_csv(), args.out)
        return EXIT_OK
    _emit(_dump({
        "sample_count": est.sample_count,
        "frechet_variance": est.frechet_variance,
        "alpha": est.mean_surface.alpha.levels.tolist(),
        "directions": grid.directions.tolist(),
        "mean_surface": est.mean_surface.values.tolist(),
        "variance_surface": est.variance_surface.tolist(),
    }), args.out)
    return EXIT_OK


# --------------------------------------------------------------- walk

def _walk_config(path) -> WalkConfig:
    if path is None:
        return acceptance_config()
    return WalkConfig.from_json(_load_json(path, schemas.WALK_CONFIG, "walk config"))


def path_csv(paths, times) -> str:
    rows = ((r, t, paths[r, i]) for r in range(paths.shape[0]) for i, t in enumerate(times))
    return _csv(["replicate", "t", "value"], rows)


def cdf_csv(paths, times) -> str:
    """Empirical CDF of each marginal next to the ``N(0, t)`` target."""
    rows = []
    for i, t in enumerate(times):
        if t <= 0:
            continue
        xs = np.sort(paths[:, i])
        emp = np.arange(1, xs.size + 1) / xs.size
        target = ndtr(xs / np.sqrt(t))
        rows.extend((t, x, e, g) for x, e, g in zip(xs, emp, target))
    return _csv(["t", "x", "empirical", "target"], rows)


def cmd_walk(args) -> int:
    cfg = _walk_config(args.config)
    seed = _seed(args, ACCEPTANCE_SEED)
    paths, _ = simulate(cfg, args.R, seed, norm=resolve_normalization(cfg, seed), workers=args.workers)
    if args.format == "json":
        _emit(_dump({"times": list(cfg.times), "seed": seed, "paths": paths.tolist()}), args.out)
    else:
        _emit(path_csv(paths, cfg.times), args.out)
    return EXIT_OK


# ------------------------------------------------------------- verify

def cmd_verify(args) -> int:
    cfg = _walk_config(args.config)
    seed = _seed(args, ACCEPTANCE_SEED)
    report = run_fdd(cfg, args.R, seed, workers=args.workers, chebyshev=DEFAULT_CHEBYSHEV)
    text = report.to_json()
    schemas.validate(json.loads(text), schemas.FDD_REPORT, "report")
    _emit(text, args.out)
    if args.paths_csv or args.cdf_csv:
        paths, _ = simulate(cfg, args.R, seed, norm=resolve_normalization(cfg, seed), workers=args.workers)
        if args.paths_csv:
            _emit(path_csv(paths, cfg.times), args.paths_csv)
        if args.cdf_csv:
            _emit(cdf_csv(paths, cfg.times), args.cdf_csv)
    for c in report.checks:
        status = "pass" if c["pass"] else "FAIL"
        print(f"{status} {c['name']}: {c['value']:.4g} (limit {c['limit']:.4g})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_THRESHOLD


# ------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (falls back to $FD_SEED)")
    common.add_argument("--workers", type=int, default=1, help="worker processes for replicates")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None,
                        help="output format (default csv for walk, json elsewhere)")

    ap = argparse.ArgumentParser(prog="fuzzydonsker", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="write a fuzzy-vector fixture")
    g.add_argument("shape", choices=("crisp", "square-stack", "shrinking-hull"))
    g.add_argument("--levels", type=int, default=10, help="number of alpha levels L")
    g.add_argument("--at", default="0,0", help="point of a crisp fixture")
    g.add_argument("--center", default="0,0", help="center of a square stack")
    g.add_argument("--points", default=None, help="hull points 'x,y;x,y;...'")
    g.add_argument("--vertices", type=int, default=6, help="random hull points when --points is absent")
    g.set_defaults(func=cmd_gen)

    m = sub.add_parser("metrics", parents=[common], help="distances between two fixtures")
    m.add_argument("file_a")
    m.add_argument("file_b")
    m.add_argument("-p", type=float, default=2.0)
    m.add_argument("-M", type=int, nargs="+", default=[64], help="direction-grid sizes")
    m.set_defaults(func=cmd_metrics)

    e = sub.add_parser("estimate", parents=[common], help="Monte Carlo moments of a sampler")
    e.add_argument("spec", help="sampler spec JSON")
    e.add_argument("-M", type=int, default=64)
    e.add_argument("-R", type=int, default=4000)
    e.set_defaults(func=cmd_estimate)

    w = sub.add_parser("walk", parents=[common], help="dump pinned walk paths")
    w.add_argument("config", nargs="?", default=None, help="walk config JSON (default: acceptance config)")
    w.add_argument("-R", type=int, default=100)
    w.set_defaults(func=cmd_walk)

    v = sub.add_parser("verify", parents=[common], help="run the finite-dimensional battery")
    v.add_argument("config", nargs="?", default=None, help="walk config JSON (default: acceptance config)")
    v.add_argument("-R", type=int, default=2000)
    v.add_argument("--paths-csv", default=None, help="also write replicate paths")
    v.add_argument("--cdf-csv", default=None, help="also write empirical and target CDFs")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        # parent-parser actions are shared, so per-command defaults are set here
        args.format = "csv" if args.command == "walk" else "json"
    try:
        return args.func(args)
    except (FuzzyDonskerError, ValueError, OSError, ArithmeticError, IndexError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
