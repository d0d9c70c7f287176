"""Compiled kernels against the pure-Python fallback.

Times each hot kernel on fixed inputs with both implementations, then an
end-to-end acceptance battery in a subprocess per backend (the backend is
chosen at import, so it cannot be swapped inside one process).

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from fuzzydonsker import _pykernels as py
from fuzzydonsker._backend import compiled_available
from fuzzydonsker.convex import Polytope


def cases():
    rng = np.random.default_rng(0)
    pts = rng.standard_normal((2000, 2))
    p = Polytope(rng.standard_normal((40, 2))).vertices
    q = Polytope(rng.standard_normal((40, 2)) + 0.3).vertices
    th = 2 * np.pi * np.arange(256) / 256
    u = np.stack([np.cos(th), np.sin(th)], axis=1)
    f = np.abs(rng.standard_normal(256)) + 1.0
    centered = rng.standard_normal((2000, 401))
    floors = np.array([200, 400], dtype=np.intp)
    fracs = np.array([0.0, 0.0])
    return {
        "hull2d (n=2000)": lambda k: k.hull2d(pts, 1e-12),
        "hausdorff2d (40x40 vertices)": lambda k: k.hausdorff2d(p, q),
        "clip_halfplanes (M=256)": lambda k: k.clip_halfplanes(u, f, 10.0, 1e-9),
        "accumulate_paths (2000x401)": lambda k: k.accumulate_paths(centered, floors, fracs),
    }


def end_to_end(pure: bool) -> float:
    env = dict(os.environ)
    if pure:
        env["FUZZYDONSKER_PURE_PYTHON"] = "1"
    else:
        env.pop("FUZZYDONSKER_PURE_PYTHON", None)
    code = ("import time; from fuzzydonsker import run_fdd, acceptance_config, ACCEPTANCE_SEED; "
            "t=time.perf_counter(); run_fdd(acceptance_config(), 2000, ACCEPTANCE_SEED); "
            "print(time.perf_counter()-t)")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not compiled_available():
        sys.exit("compiled extension not built; run: pip install -e . --no-build-isolation")
    from fuzzydonsker import _ckernels as cy

    print(f"{'kernel':32s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        n = 3
        tp = min(timeit.repeat(lambda: fn(py), number=n, repeat=args.repeat)) / n * 1e3
        tc = min(timeit.repeat(lambda: fn(cy), number=n, repeat=args.repeat)) / n * 1e3
        print(f"{name:32s} {tp:10.3f} {tc:10.3f} {tp / tc:8.1f}x")
    tp, tc = end_to_end(True), end_to_end(False)
    print(f"{'acceptance battery (R=2000)':32s} {tp * 1e3:10.1f} {tc * 1e3:10.1f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
