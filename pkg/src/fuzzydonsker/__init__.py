"""Fuzzy-vector calculus on alpha-cut polytopes and a Monte Carlo check of
the fuzzy Donsker invariance principle."""

from ._backend import BACKEND
from .convex import (
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
from .errors import *  # noqa: F401,F403
from .fuzzy import (
    AlphaGrid,
    FuzzyVector,
    SupportSurface,
    dist_inf,
    dist_p,
    fuzzy_add,
    fuzzy_scale,
    rho_inf,
    rho_p,
    shrinking_hull,
    square_stack,
    support_surface,
)
from .harness import ACCEPTANCE_SEED, FddReport, Thresholds, acceptance_config, run_fdd, run_null
from .randomness import (
    PerturbationSpec,
    RngStream,
    SamplerSpec,
    ScalingSpec,
    TranslationSpec,
    estimate_moments,
    exact_mean_surface,
    pinned_sigma,
    sample,
)
from .walk import WalkConfig, drift_gap, pinned_path, resolve_normalization

__version__ = "0.1.0"
