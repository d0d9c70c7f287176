"""The fuzzy random walk and its drift-corrected pinned support process.

For a pin ``(alpha, u)`` and scaling ``n`` the process at time ``t`` is::

    s~(t) = [ sum_{j <= floor(nt)} (s_j - s_m) + frac(nt) (s_{floor(nt)+1} - s_m) ] / (sigma sqrt(n))

where ``s_j`` is the pinned support value of the j-th summand and ``s_m``
that of the mean. :func:`pinned_path` computes it directly on scalars;
:func:`partial_sum`, :func:`interpolated` and :func:`normalized` build the
same object in fuzzy-vector space for cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .convex import DirectionGrid, origin
from .errors import DegenerateVariance, GridMismatch, InsufficientSamples, InvalidConfig, NoClosedForm
from .fuzzy import AlphaGrid, FuzzyVector, fuzzy_add, fuzzy_scale
from .randomness import PILOT_STREAM_ID, SIGMA_FLOOR, RngStream, SamplerSpec

SNAP_TOL = 1e-9


def split_time(n: int, t: float) -> tuple[int, float]:
    """``(floor(n t), n t - floor(n t))`` with ``n t`` snapped to the nearest
    integer when within 1e-9 of it."""
    nt = n * t
    k = round(nt)
    if abs(nt - k) <= SNAP_TOL * max(1.0, abs(nt)):
        return int(k), 0.0
    f = math.floor(nt)
    return int(f), nt - f


@dataclass(frozen=True)
class WalkConfig:
    """Walk parameters.

    ``sigma_mode`` is ``"exact"`` (closed-form pinned sigma) or an integer
    ``R_pilot`` for a pilot estimate. ``pilot`` is the pilot size used for
    the mean when the family has no closed form (default ``10 n``).
    """

    spec: SamplerSpec
    n: int
    times: tuple
    pin_alpha: float = 1.0
    pin_u: tuple = (1.0, 0.0)
    sigma_mode: object = "exact"
    pilot: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "pin_u", tuple(float(c) for c in self.pin_u))
        if int(self.n) != self.n or self.n < 1:
            raise InvalidConfig("n must be a positive integer")
        if not self.times:
            raise InvalidConfig("need at least one time")
        ts = np.array(self.times)
        if not np.all(np.isfinite(ts)) or ts[0] < 0 or np.any(np.diff(ts) <= 0):
            raise InvalidConfig("times must be finite, non-negative and strictly increasing")
        u = np.array(self.pin_u)
        if u.shape != (self.spec.dim,) or abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise InvalidConfig(f"pin direction must be a unit {self.spec.dim}-vector")
        try:
            self.spec.alpha.index(self.pin_alpha)
        except ValueError as exc:
            raise InvalidConfig(str(exc)) from exc
        mode = self.sigma_mode
        if mode != "exact" and not (isinstance(mode, int) and not isinstance(mode, bool) and mode >= 2):
            raise InvalidConfig("sigma_mode must be 'exact' or a pilot size >= 2")

    @property
    def level(self) -> int:
        return self.spec.alpha.index(self.pin_alpha)

    @property
    def u(self) -> np.ndarray:
        return np.array(self.pin_u)

    @property
    def pilot_size(self) -> int:
        return self.pilot if self.pilot is not None else 10 * self.n

    def steps_needed(self, extra_times=()) -> int:
        ts = list(self.times) + list(extra_times)
        return max(split_time(self.n, t)[0] for t in ts) + 1

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "n": self.n,
            "times": list(self.times),
            "pin": {"alpha": self.pin_alpha, "u": list(self.pin_u)},
            "sigma_mode": self.sigma_mode if self.sigma_mode == "exact" else {"estimated": self.sigma_mode},
            "pilot": self.pilot,
        }

    @classmethod
    def from_json(cls, obj) -> "WalkConfig":
        mode = obj.get("sigma_mode", "exact")
        if isinstance(mode, dict):
            mode = int(mode["estimated"])
        pin = obj.get("pin", {})
        return cls(
            spec=SamplerSpec.from_json(obj["spec"]),
            n=int(obj["n"]),
            times=tuple(obj["times"]),
            pin_alpha=float(pin.get("alpha", 1.0)),
            pin_u=tuple(pin.get("u", (1.0, 0.0))),
            sigma_mode=mode,
            pilot=obj.get("pilot"),
        )


@dataclass(frozen=True)
class Normalization:
    """Resolved pinned mean ``s_m(alpha, u)`` and pinned sigma."""

    mean: float
    sigma: float
    mean_exact: bool
    sigma_exact: bool


def resolve_normalization(cfg: WalkConfig, seed: int) -> Normalization:
    """Closed forms where available, else a pilot run on the reserved stream."""
    spec, level, u = cfg.spec, cfg.level, cfg.u
    pilot_vals = None

    def pilot(size):
        nonlocal pilot_vals
        if pilot_vals is None or pilot_vals.size < size:
            gen = RngStream(seed, PILOT_STREAM_ID).generator()
            pilot_vals = spec.pinned(spec.draw(gen, size), level, u)
        return pilot_vals[:size]

    try:
        mean = _exact_pinned_mean(spec, level, u)
        mean_exact = True
    except NoClosedForm:
        mean = float(np.mean(pilot(cfg.pilot_size)))
        mean_exact = False

    if cfg.sigma_mode == "exact":
        sigma = float(spec.exact_pinned_sigma(level, u))
        sigma_exact = True
    else:
        sigma = float(np.std(pilot(int(cfg.sigma_mode)), ddof=1))
        sigma_exact = False
    if not sigma >= SIGMA_FLOOR:
        raise DegenerateVariance(f"pinned sigma {sigma:.3g} is below {SIGMA_FLOOR}")
    return Normalization(mean, sigma, mean_exact, sigma_exact)


def _exact_pinned_mean(spec, level, u):
    # evaluate the closed-form mean surface on a tiny grid that contains u
    perp = np.zeros_like(u)
    perp[0], perp[1] = -u[1], u[0]
    if np.linalg.norm(perp) == 0:
        perp[0], perp[2] = -u[2], u[0]
    perp /= np.linalg.norm(perp)
    grid = DirectionGrid(np.vstack([u, -u, perp, -perp]))
    return float(spec.exact_mean_values(grid)[level, 0])


@dataclass(frozen=True)
class PinnedPath:
    values: np.ndarray
    replicate: int = 0
    times: tuple = field(default=())


def _check_samples(xs):
    if not xs:
        return
    a = xs[0].alpha
    if any(x.alpha != a for x in xs):
        raise GridMismatch("summands live on different alpha grids")


def partial_sum(xs, *, dim: int | None = None, alpha: AlphaGrid | None = None) -> FuzzyVector:
    """Left fold of Minkowski addition; the empty sum is the crisp origin."""
    xs = list(xs)
    if not xs:
        if dim is None:
            raise ValueError("empty partial sum needs an explicit dimension")
        alpha = alpha or AlphaGrid.uniform()
        return FuzzyVector(alpha, [origin(dim)] * len(alpha), validate=False)
    _check_samples(xs)
    acc = xs[0]
    for x in xs[1:]:
        acc = fuzzy_add(acc, x)
    return acc


def interpolated(xs, t: float) -> FuzzyVector:
    """``S_floor(t) + (t - floor(t)) X_{floor(t)+1}``."""
    xs = list(xs)
    if t < 0:
        raise ValueError("time must be non-negative")
    k, frac = split_time(1, t)
    if not xs:
        raise InsufficientSamples("need at least one summand")
    if k + (1 if frac > 0 else 0) > len(xs):
        raise InsufficientSamples(f"t={t} needs {k + 1} summands, have {len(xs)}")
    s = partial_sum(xs[:k], dim=xs[0].dim, alpha=xs[0].alpha)
    if frac > 0:
        s = fuzzy_add(s, fuzzy_scale(frac, xs[k]))
    return s


def normalized(xs, t: float, n: int, sigma: float) -> FuzzyVector:
    """``L_{nt} / (sigma sqrt(n))``."""
    if not sigma > 0:
        raise DegenerateVariance("sigma must be positive")
    return fuzzy_scale(1.0 / (sigma * math.sqrt(n)), interpolated(xs, n * t))


def _time_index(cfg, times):
    splits = [split_time(cfg.n, t) for t in times]
    return np.array([s[0] for s in splits], dtype=np.intp), np.array([s[1] for s in splits])


def pinned_values(cfg: WalkConfig, rng: RngStream, steps: int) -> np.ndarray:
    """Pinned support values of the first ``steps`` summands on ``rng``."""
    params = cfg.spec.draw(rng.generator(), steps)
    return cfg.spec.pinned(params, cfg.level, cfg.u)


def centered_paths(centered, cfg: WalkConfig, norm: Normalization, times=None) -> np.ndarray:
    """Rows of centered pinned values -> drift-corrected process at ``times``."""
    floors, fracs = _time_index(cfg, cfg.times if times is None else times)
    acc = kernels.accumulate_paths(np.ascontiguousarray(np.atleast_2d(centered)), floors, fracs)
    return acc / (norm.sigma * math.sqrt(cfg.n))


def pinned_path(cfg: WalkConfig, rng: RngStream, norm: Normalization | None = None) -> PinnedPath:
    """Drift-corrected pinned process at ``cfg.times`` for one realization."""
    if norm is None:
        norm = resolve_normalization(cfg, rng.seed)
    vals = pinned_values(cfg, rng, cfg.steps_needed())
    path = centered_paths(vals - norm.mean, cfg, norm)[0]
    return PinnedPath(path, rng.stream_id, cfg.times)


def interpolation_remainder(centered, cfg: WalkConfig, norm: Normalization, t: float) -> np.ndarray:
    """``frac(nt) (s_{floor(nt)+1} - s_m) / (sigma sqrt(n))`` per row."""
    k, frac = split_time(cfg.n, t)
    c = np.atleast_2d(centered)
    if frac == 0.0:
        return np.zeros(c.shape[0])
    return frac * c[:, k] / (norm.sigma * math.sqrt(cfg.n))


@dataclass(frozen=True)
class DriftGap:
    t: float
    eps: float
    rate: float
    bound: float
    replicates: int


def drift_gap(cfg: WalkConfig, seed: int, eps: float, replicates: int, t: float | None = None,
              norm: Normalization | None = None) -> DriftGap:
    """Fraction of replicates whose interpolation remainder at ``t`` exceeds
    ``eps``, next to the Chebyshev bound ``1 / (eps^2 n)``.

    Replicate ``r`` uses stream ``r`` of ``seed``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    t = cfg.times[-1] if t is None else float(t)
    if norm is None:
        norm = resolve_normalization(cfg, seed)
    steps = split_time(cfg.n, t)[0] + 1
    hits = 0
    for r in range(replicates):
        vals = pinned_values(cfg, RngStream(seed, r), steps)
        rem = interpolation_remainder(vals - norm.mean, cfg, norm, t)
        hits += int(abs(rem[0]) > eps)
    return DriftGap(t, eps, hits / replicates, 1.0 / (eps * eps * cfg.n), replicates)
