"""Phase classification and theta sweeps.

Two classifications are reported for every parameter point:

``classification``
    The number of strictly positive fixed points, which is what the
    quadrature oracle finds.  The nonconstant solutions ``c (1 +- lam phi)``
    are mirror images under ``t -> 1 - t``, so they are positive or
    non-positive together and the count is always 1 or 3.
``stated_classification``
    The count claimed by the closed-form analysis, which keeps the ``+lam``
    branch beyond the ratio threshold and so predict a two-measure window.
    Inside the default domain that window is empty for every (k, n) we
    have checked, and the two columns agree.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .model import ModelParams, NumericsConfig, validate_kernel_positivity
from .quadrature import build_rule, fixed_point_grid, residual_norm
from .reduction import (
    ParametricFixedPoint,
    branch_scale,
    build_polynomial,
    positive_root,
    reduced_coefficients,
    theta_affine_parts,
)

NEAR_THRESHOLD = 1e-3


class Classification(str, enum.Enum):
    UNIQUE = "UniqueMeasure"
    TWO = "TwoMeasures"
    THREE = "ThreeMeasures"

    @property
    def count(self) -> int:
        return {"UniqueMeasure": 1, "TwoMeasures": 2, "ThreeMeasures": 3}[self.value]

    def __str__(self):
        return self.value


class MonotonicityWarning(UserWarning):
    """lambda_star(theta) decreased along a sweep."""


@dataclass(frozen=True)
class Region:
    lo: float
    hi: float
    classification: Classification
    lo_closed: bool = False
    hi_closed: bool = False

    def contains(self, theta: float) -> bool:
        above = theta >= self.lo if self.lo_closed else theta > self.lo
        below = theta <= self.hi if self.hi_closed else theta < self.hi
        return above and below

    def as_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "lo_closed": self.lo_closed,
            "hi_closed": self.hi_closed,
            "classification": self.classification.value,
        }


@dataclass(frozen=True)
class PhaseResult:
    classification: Classification
    stated_classification: Classification
    theta1: float
    theta_top: float | None
    theta_ratio: float
    thresholds: tuple[float, ...]
    lambda_star: float | None
    fixed_points: tuple[ParametricFixedPoint, ...]
    domain_bound: float
    warnings: tuple[str, ...] = ()


def ratio_threshold(params: ModelParams) -> float:
    """theta at which the positive root reaches ``2**(1/(2n+1))``.

    The phase polynomial is affine in theta, so ``P(2**(1/(2n+1))) = 0``
    is a linear equation.
    """
    a, b = theta_affine_parts(params)
    tau = params.positivity_bound**2
    a_val = sum(a[i] * tau**i for i in range(len(a)))
    b_val = sum(b[i] * tau**i for i in range(len(b)))
    return float(a_val / b_val)


def _window_top(theta_r: float, theta_top: float | None) -> float:
    return theta_r if theta_top is None else min(theta_r, theta_top)


def _classify_theta(theta, theta1, theta_r, theta_top) -> Classification:
    if theta <= theta1:
        return Classification.UNIQUE
    if theta < _window_top(theta_r, theta_top):
        return Classification.THREE
    return Classification.UNIQUE


def _stated_theta(theta, theta1, theta_r, theta_top) -> Classification:
    if theta <= theta1 or (theta_top is not None and theta >= theta_top):
        return Classification.UNIQUE
    if theta < theta_r:
        return Classification.THREE
    return Classification.TWO


def _regions(bound, cuts, classify_at) -> list[Region]:
    """Split (-bound, bound) at the interior cut points and label each piece.

    Each cut point is attached to the neighbour whose label it shares.
    """
    cuts = sorted({c for c in cuts if -bound < c < bound})
    edges = [-bound, *cuts, bound]
    pieces = [[lo, hi, classify_at(0.5 * (lo + hi)), False, False]
              for lo, hi in zip(edges[:-1], edges[1:])]
    for left, right in zip(pieces[:-1], pieces[1:]):
        label = classify_at(left[1])
        if label == left[2]:
            left[4] = True
        elif label == right[2]:
            right[3] = True
    merged: list[list] = []
    for p in pieces:
        if merged and merged[-1][2] == p[2]:
            merged[-1][1], merged[-1][4] = p[1], p[4]
        else:
            merged.append(p)
    return [Region(*p) for p in merged]


def _thresholds(params: ModelParams):
    coeffs = reduced_coefficients(params)
    return coeffs, coeffs.theta1, ratio_threshold(params), coeffs.theta_top


def phase_regions(params: ModelParams, *, stated: bool = False) -> list[Region]:
    """Partition of the theta domain by classification (``params.theta`` is ignored)."""
    _, theta1, theta_r, theta_top = _thresholds(params)
    rule = _stated_theta if stated else _classify_theta
    cuts = [theta1, theta_r] + ([theta_top] if theta_top is not None else [])
    return _regions(
        params.theta_domain_bound, cuts, lambda t: rule(t, theta1, theta_r, theta_top)
    )


def classify(params: ModelParams) -> PhaseResult:
    coeffs, theta1, theta_r, theta_top = _thresholds(params)
    theta, bound = params.theta, params.theta_domain_bound
    cls = _classify_theta(theta, theta1, theta_r, theta_top)
    stated = _stated_theta(theta, theta1, theta_r, theta_top)

    notes = []
    if not validate_kernel_positivity(params):
        notes.append(
            f"kernel is not positive on [0,1]^2 at theta={theta:.17g}; log K is undefined"
        )
    if theta_r >= bound:
        notes.append(
            f"stated two-measure window [{theta_r:.6g}, ...) lies outside the domain "
            f"|theta| < {bound:.6g} and is empty"
        )
    if theta_top is not None and theta_top >= bound:
        notes.append(
            f"upper unique window theta >= theta_{2 * params.s + 1} = {theta_top:.6g} "
            "lies outside the domain and is empty"
        )
    if stated is not cls:
        notes.append(
            f"closed-form analysis states {stated.value} here, but both nonconstant "
            "branches are non-positive on [0,1]"
        )

    lam = None
    if theta > theta1 and (theta_top is None or theta < theta_top):
        lam = positive_root(build_polynomial(params))
    fps = [ParametricFixedPoint(1.0, 0.0, params.n)]
    if cls is Classification.THREE:
        fps += [ParametricFixedPoint(branch_scale(params, s * lam), s * lam, params.n) for s in (1, -1)]

    return PhaseResult(
        classification=cls,
        stated_classification=stated,
        theta1=theta1,
        theta_top=theta_top,
        theta_ratio=theta_r,
        thresholds=tuple(float(t) for t in coeffs.thetas),
        lambda_star=lam,
        fixed_points=tuple(fps),
        domain_bound=bound,
        warnings=tuple(notes),
    )


@dataclass(frozen=True)
class SweepRow:
    theta: float
    classification: Classification
    lambda_star: float | None
    branches: tuple[tuple[float, float], ...]  # (c, lam) per fixed point
    residual: float | None = None
    near_threshold: bool = False
    stated_classification: Classification | None = None
    warnings: tuple[str, ...] = field(default=(), compare=False)


def near_threshold(result: PhaseResult, theta: float, tol: float = NEAR_THRESHOLD) -> bool:
    cuts = [result.theta1, result.theta_ratio]
    if result.theta_top is not None:
        cuts.append(result.theta_top)
    return any(abs(theta - c) < tol for c in cuts)


def _row(params: ModelParams, rule, verify: bool) -> SweepRow:
    res = classify(params)
    residual = None
    if verify:
        residual = max(
            residual_norm(params, rule, fixed_point_grid(rule, fp.c, fp.lam))
            for fp in res.fixed_points
        )
    return SweepRow(
        theta=params.theta,
        classification=res.classification,
        lambda_star=res.lambda_star,
        branches=tuple((fp.c, fp.lam) for fp in res.fixed_points),
        residual=residual,
        near_threshold=near_threshold(res, params.theta),
        stated_classification=res.stated_classification,
        warnings=res.warnings,
    )


def sweep(
    params: ModelParams,
    theta_grid,
    config: NumericsConfig | None = None,
    *,
    verify: bool = False,
    workers: int | None = None,
) -> list[SweepRow]:
    """Classify every theta in ``theta_grid`` (``params.theta`` is ignored).

    Rows come back in grid order whatever ``workers`` is.
    """
    config = config or NumericsConfig()
    points = []
    for theta in theta_grid:
        theta = float(theta)
        if not (math.isfinite(theta) and abs(theta) < params.theta_domain_bound):
            raise ValueError(
                f"theta={theta!r} outside the domain |theta| < {params.theta_domain_bound:.17g}"
            )
        points.append(params.with_theta(theta, formal=False))
    rule = build_rule(params.n, config.quad_order) if verify else None

    if workers and workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(lambda p: _row(p, rule, verify), points))
    else:
        rows = [_row(p, rule, verify) for p in points]

    lams = [(r.theta, r.lambda_star) for r in rows if r.lambda_star is not None]
    lams.sort()
    if any(b[1] < a[1] for a, b in zip(lams[:-1], lams[1:])):
        warnings.warn("lambda_star is not increasing along the sweep", MonotonicityWarning, stacklevel=2)
    return rows
