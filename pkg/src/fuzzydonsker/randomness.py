"""Seeded iid fuzzy random variables and their moment estimators.

Each sampler family separates *drawing* (random parameters pulled from a
generator, vectorized over a batch) from *realizing* (turning one parameter
row into a :class:`FuzzyVector`). The walk code evaluates pinned support
values straight from the parameter batch, and the fuzzy-space route
realizes the same rows, so both routes see identical randomness.

Families
--------
translation
    ``base + {Z}`` with ``Z`` Gaussian ``N(m, sigma^2 I)`` or uniform on the
    cube ``m + [-h, h]^d``.
scaling
    ``lam * base`` with ``lam`` uniform on ``[lambda_min, lambda_max]``,
    ``lambda_min > 0``.
vertex-perturbation
    The outer cut's vertices get iid ``N(0, noise^2)`` jitter; level ``a`` is
    the jittered hull shrunk toward the jittered point mean by ``g(a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convex import DirectionGrid, Polytope, support_values
from .errors import DegenerateVariance, DimensionMismatch, InvalidSpec, NoClosedForm
from .fuzzy import AlphaGrid, FuzzyVector, SupportSurface, fuzzy_scale, shrink_profile, support_surface

SIGMA_FLOOR = 1e-12
# reserved for pilot estimates of the mean and pinned sigma
PILOT_STREAM_ID = 2**32


@dataclass(frozen=True)
class RngStream:
    """Counter-based (Philox) stream keyed by ``(seed, stream_id)``."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.stream_id < 0:
            raise ValueError("stream id must be non-negative")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.Philox(ss))


class SamplerSpec:
    """Law of an iid fuzzy random variable. Use the family subclasses."""

    family: str = ""

    def __init__(self, base: FuzzyVector):
        if not isinstance(base, FuzzyVector):
            raise InvalidSpec("base must be a FuzzyVector")
        self.base = base

    @property
    def alpha(self) -> AlphaGrid:
        return self.base.alpha

    @property
    def dim(self) -> int:
        return self.base.dim

    exact_mean_available = False

    def draw(self, gen: np.random.Generator, count: int) -> np.ndarray:
        raise NotImplementedError

    def realize(self, params) -> FuzzyVector:
        raise NotImplementedError

    def pinned(self, params, level: int, u) -> np.ndarray:
        """Support values ``s_X(alpha_level, u)`` for every parameter row."""
        raise NotImplementedError

    def surfaces(self, params, grid: DirectionGrid) -> np.ndarray:
        """Support surfaces for every parameter row, shape (count, L, M)."""
        raise NotImplementedError

    def exact_mean_values(self, grid: DirectionGrid) -> np.ndarray:
        raise NoClosedForm(f"no closed-form mean for the {self.family} family")

    def exact_pinned_sigma(self, level: int, u) -> float:
        raise NoClosedForm(f"no closed-form pinned sigma for the {self.family} family")

    def scaled(self, c: float) -> "SamplerSpec":
        """Spec of ``c * X`` for ``c > 0``."""
        raise NotImplementedError

    def _base_json(self):
        return {"family": self.family, "base": self.base.to_json()}

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(obj) -> "SamplerSpec":
        try:
            family = obj["family"]
            base = FuzzyVector.from_json(obj["base"])
        except (KeyError, TypeError) as exc:
            raise InvalidSpec(f"malformed sampler spec: {exc}") from exc
        if family == "translation":
            return TranslationSpec(base, mean=obj.get("mean"), law=obj.get("law", "gaussian"),
                                   sigma=obj.get("sigma", 1.0), half_width=obj.get("half_width", 1.0))
        if family == "scaling":
            return ScalingSpec(base, obj["lambda_min"], obj["lambda_max"])
        if family == "vertex-perturbation":
            return PerturbationSpec(base, obj["noise"], obj.get("profile"))
        raise InvalidSpec(f"unknown sampler family {family!r}")


def _base_pinned(spec, level, u):
    return float(support_values(spec.base.cuts[level], np.asarray(u, dtype=np.float64)[None, :])[0])


def _base_surface(spec, grid):
    return support_surface(spec.base, grid).values


class TranslationSpec(SamplerSpec):
    family = "translation"
    exact_mean_available = True

    def __init__(self, base, mean=None, law="gaussian", sigma=1.0, half_width=1.0):
        super().__init__(base)
        m = np.zeros(base.dim) if mean is None else np.array(mean, dtype=np.float64)
        if m.shape != (base.dim,) or not np.all(np.isfinite(m)):
            raise InvalidSpec(f"mean must be a finite {base.dim}-vector")
        if law not in ("gaussian", "uniform"):
            raise InvalidSpec(f"unknown translation law {law!r}")
        sigma, half_width = float(sigma), float(half_width)
        if not (math.isfinite(sigma) and sigma >= 0 and math.isfinite(half_width) and half_width >= 0):
            raise InvalidSpec("sigma and half_width must be finite and non-negative")
        m.setflags(write=False)
        self.mean = m
        self.law = law
        self.sigma = sigma
        self.half_width = half_width

    def draw(self, gen, count):
        if self.law == "gaussian":
            return self.mean + self.sigma * gen.standard_normal((count, self.dim))
        return self.mean + gen.uniform(-self.half_width, self.half_width, (count, self.dim))

    def realize(self, params):
        z = np.asarray(params, dtype=np.float64)
        return FuzzyVector(self.alpha, [c.translate(z) for c in self.base.cuts], validate=False)

    def pinned(self, params, level, u):
        u = np.asarray(u, dtype=np.float64)
        return _base_pinned(self, level, u) + params @ u

    def surfaces(self, params, grid):
        shift = params @ grid.directions.T
        return _base_surface(self, grid)[None, :, :] + shift[:, None, :]

    def exact_mean_values(self, grid):
        return _base_surface(self, grid) + (grid.directions @ self.mean)[None, :]

    def exact_pinned_sigma(self, level, u):
        norm = float(np.linalg.norm(u))
        if self.law == "gaussian":
            return self.sigma * norm
        return self.half_width * norm / math.sqrt(3.0)

    def scaled(self, c):
        if not c > 0:
            raise InvalidSpec("scale factor must be positive")
        return TranslationSpec(fuzzy_scale(c, self.base), c * self.mean, self.law,
                               c * self.sigma, c * self.half_width)

    def to_json(self):
        out = self._base_json()
        out.update(law=self.law, mean=self.mean.tolist())
        if self.law == "gaussian":
            out["sigma"] = self.sigma
        else:
            out["half_width"] = self.half_width
        return out


class ScalingSpec(SamplerSpec):
    family = "scaling"
    exact_mean_available = True

    def __init__(self, base, lambda_min, lambda_max):
        super().__init__(base)
        lo, hi = float(lambda_min), float(lambda_max)
        if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo <= hi):
            raise InvalidSpec("scaling law needs 0 < lambda_min <= lambda_max < inf")
        self.lambda_min = lo
        self.lambda_max = hi

    def draw(self, gen, count):
        return gen.uniform(self.lambda_min, self.lambda_max, count)

    def realize(self, params):
        return fuzzy_scale(float(params), self.base)

    def pinned(self, params, level, u):
        return np.asarray(params) * _base_pinned(self, level, u)

    def surfaces(self, params, grid):
        return np.asarray(params)[:, None, None] * _base_surface(self, grid)[None, :, :]

    def exact_mean_values(self, grid):
        return 0.5 * (self.lambda_min + self.lambda_max) * _base_surface(self, grid)

    def exact_pinned_sigma(self, level, u):
        sd = (self.lambda_max - self.lambda_min) / math.sqrt(12.0)
        return sd * abs(_base_pinned(self, level, u))

    def scaled(self, c):
        if not c > 0:
            raise InvalidSpec("scale factor must be positive")
        return ScalingSpec(fuzzy_scale(c, self.base), self.lambda_min, self.lambda_max)

    def to_json(self):
        out = self._base_json()
        out.update(lambda_min=self.lambda_min, lambda_max=self.lambda_max)
        return out


class PerturbationSpec(SamplerSpec):
    family = "vertex-perturbation"

    def __init__(self, base, noise, profile=None):
        super().__init__(base)
        noise = float(noise)
        if not (math.isfinite(noise) and noise >= 0):
            raise InvalidSpec("noise must be finite and non-negative")
        try:
            g = shrink_profile(profile, base.alpha)
        except ValueError as exc:
            raise InvalidSpec(str(exc)) from exc
        g.setflags(write=False)
        self.noise = noise
        self.profile = g
        self.anchor = base.cuts[0].vertices

    def draw(self, gen, count):
        v, d = self.anchor.shape
        return self.anchor[None, :, :] + self.noise * gen.standard_normal((count, v, d))

    def realize(self, params):
        pts = np.asarray(params, dtype=np.float64)
        c = pts.mean(axis=0)
        return FuzzyVector(self.alpha, [Polytope(c + g * (pts - c)) for g in self.profile], validate=False)

    def pinned(self, params, level, u):
        u = np.asarray(u, dtype=np.float64)
        proj = params @ u
        cu = proj.mean(axis=1)
        return cu + self.profile[level] * (proj.max(axis=1) - cu)

    def surfaces(self, params, grid):
        proj = params @ grid.directions.T
        cu = proj.mean(axis=1)
        top = proj.max(axis=1)
        return cu[:, None, :] + self.profile[None, :, None] * (top - cu)[:, None, :]

    def scaled(self, c):
        if not c > 0:
            raise InvalidSpec("scale factor must be positive")
        return PerturbationSpec(fuzzy_scale(c, self.base), c * self.noise, self.profile)

    def to_json(self):
        out = self._base_json()
        out.update(noise=self.noise, profile=self.profile.tolist())
        return out


def sample(spec: SamplerSpec, rng: RngStream) -> FuzzyVector:
    """One draw of the fuzzy random variable described by ``spec``."""
    return spec.realize(spec.draw(rng.generator(), 1)[0])


def exact_mean_surface(spec: SamplerSpec, grid: DirectionGrid) -> SupportSurface:
    if grid.dim != spec.dim:
        raise DimensionMismatch(f"{grid.dim}-d grid for a {spec.dim}-d sampler")
    return SupportSurface(spec.alpha, grid, spec.exact_mean_values(grid))


@dataclass(frozen=True)
class MomentEstimates:
    mean_surface: SupportSurface
    variance_surface: np.ndarray
    frechet_variance: float
    sample_count: int


def moments_from_surfaces(alpha: AlphaGrid, grid: DirectionGrid, surfaces) -> MomentEstimates:
    """Entrywise mean and unbiased variance of a stack of support surfaces."""
    s = np.asarray(surfaces, dtype=np.float64)
    if s.ndim != 3 or s.shape[0] < 2:
        raise ValueError("need at least two surfaces of shape (L, M)")
    mean = s.mean(axis=0)
    var = s.var(axis=0, ddof=1)
    var.setflags(write=False)
    w = np.outer(alpha.weights, grid.weights)
    return MomentEstimates(
        mean_surface=SupportSurface(alpha, grid, mean, validate=False),
        variance_surface=var,
        frechet_variance=float(np.sum(w * var)),
        sample_count=s.shape[0],
    )


def estimate_moments(spec: SamplerSpec, grid: DirectionGrid, count: int, rng: RngStream) -> MomentEstimates:
    """Monte Carlo Bochner mean, pointwise variance and Frechet variance.

    The Frechet variance is the weighted (L^1) quadrature of the pointwise
    variance surface.
    """
    if count < 2:
        raise ValueError("need at least two samples")
    if grid.dim != spec.dim:
        raise DimensionMismatch(f"{grid.dim}-d grid for a {spec.dim}-d sampler")
    params = spec.draw(rng.generator(), count)
    return moments_from_surfaces(spec.alpha, grid, spec.surfaces(params, grid))


def pinned_sigma(spec: SamplerSpec, alpha: float, u, count: int, rng: RngStream, *, exact: bool = True) -> float:
    """Standard deviation of ``s_X(alpha, u)``.

    Closed form when the family has one and ``exact`` is set; otherwise the
    unbiased sample standard deviation over ``count`` draws.

    Raises
    ------
    DegenerateVariance
        If the result is below 1e-12.
    """
    level = spec.alpha.index(alpha)
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (spec.dim,):
        raise DimensionMismatch(f"direction of shape {u.shape} for a {spec.dim}-d sampler")
    sigma = None
    if exact:
        try:
            sigma = spec.exact_pinned_sigma(level, u)
        except NoClosedForm:
            sigma = None
    if sigma is None:
        if count < 2:
            raise ValueError("need at least two samples")
        vals = spec.pinned(spec.draw(rng.generator(), count), level, u)
        sigma = float(np.std(vals, ddof=1))
    if not sigma >= SIGMA_FLOOR:
        raise DegenerateVariance(f"pinned sigma {sigma:.3g} is below {SIGMA_FLOOR}")
    return sigma
