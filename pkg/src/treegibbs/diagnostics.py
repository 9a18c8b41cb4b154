"""Cross-checks of the printed closed forms against the derived reduction.

All printed formulas are written for the coupling ``g`` multiplying
``phi(t) phi(u)``, so derived thresholds are compared after multiplying by
``params.kernel_scale``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .model import ModelParams, basis_moment
from .phase import ratio_threshold
from .reduction import reduced_coefficients, reduced_map

MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class FormulaCheck:
    name: str
    printed: tuple[float, ...]
    derived: tuple[float, ...]
    note: str = ""
    rtol: float = MATCH_RTOL

    @property
    def matches(self) -> bool:
        if len(self.printed) != len(self.derived):
            return False
        return bool(np.allclose(self.printed, self.derived, rtol=self.rtol, atol=0.0))

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "printed": list(self.printed),
            "derived": list(self.derived),
            "matches": self.matches,
            "note": self.note,
        }


def printed_thresholds(k: int, n: int, reading: str = "printed") -> np.ndarray:
    """theta_1, theta_3, ... from the closed forms as printed.

    For odd k, ``reading="symmetric"`` replaces the factor ``(2s+2i+3)`` by
    ``(2n+2i+3)``, mirroring the even-k formula.
    """
    s, p = k // 2, 2 * n + 1
    q = 4.0 ** (1.0 / p)
    if k % 2 == 0:
        return np.array([
            (2 * i + 1) * (2 * n + 2 * i + 3) * q / ((2 * s - 2 * i) * (2 * n + 2 * i + 1))
            for i in range(s)
        ])
    mid = (lambda i: 2 * s + 2 * i + 3) if reading == "printed" else (lambda i: 2 * n + 2 * i + 3)
    return np.array([
        (2 * i + 1) * mid(i) * q / ((2 * s - 2 * i + 1) * (2 * n + 2 * i + 1))
        for i in range(s + 1)
    ])


def printed_betas(k: int, n: int) -> np.ndarray:
    """beta_1, beta_3, ... as printed: C(2s, i) alpha_{i+1} or C(2s+1, i+1) alpha_{i+1}."""
    s = k // 2
    if k % 2 == 0:
        return np.array([comb(2 * s, 2 * i + 1) * basis_moment(n, 2 * i + 2) for i in range(s)])
    return np.array([comb(2 * s + 1, 2 * i + 2) * basis_moment(n, 2 * i + 2) for i in range(s + 1)])


def printed_ratio_threshold(k: int, n: int, betas=None, thetas=None) -> float:
    s, p = k // 2, 2 * n + 1
    betas = printed_betas(k, n) if betas is None else np.asarray(betas)
    thetas = printed_thresholds(k, n) if thetas is None else np.asarray(thetas)
    w = np.array([2.0 ** (2 * i / p) for i in range(len(betas))])
    num = np.sum(w * betas * thetas)
    if k % 2 == 0:
        num += basis_moment(n, 2 * s) * 2.0 ** (2 * s / p)
    return float(num / np.sum(w * betas))


def printed_reduced_map(k: int, n: int, theta: float, x: float, y: float, corrected: bool = False):
    """The closed-form two-dimensional map as printed, in its own basis.

    The printed basis is ``C1 + C2 * theta * root(4 (t - 1/2))`` with the kernel
    ``1 + theta * root(4 (t-1/2)(u-1/2))``.  ``corrected=True`` divides both
    components by ``2**(1/(2n+1)) * theta * y``, the factor the printed sums
    are missing.  Singular at ``y = 0``.
    """
    p = 2 * n + 1
    r = 2.0 ** (1.0 / p)
    plus, minus = x + r * theta * y, x - r * theta * y
    xs = factorial(2 * n + 1) * factorial(k) / 2 * sum(
        (-1) ** i / (factorial(2 * n - i) * factorial(k + 1 + i))
        * (plus ** (k + 1 + i) - (-1) ** i * minus ** (k + 1 + i))
        / (2.0 ** (i / p) * theta**i * y**i)
        for i in range(2 * n + 1)  # the i = 2n+1 term has 1/(-1)! = 0
    )
    ys = (2 * n + 1) ** 2 * factorial(2 * n) * factorial(k) / (2 * r) * sum(
        (-1) ** i / (factorial(2 * n + 1 - i) * factorial(k + 1 + i))
        * (plus ** (k + 1 + i) + (-1) ** i * minus ** (k + 1 + i))
        / (2.0 ** (i / p) * theta**i * y**i)
        for i in range(2 * n + 2)
    )
    if corrected:
        xs, ys = xs / (r * theta * y), ys / (r * theta * y)
    return xs, ys


def _map_check(params: ModelParams, corrected: bool) -> FormulaCheck:
    # literal-kernel theta giving the same coupling
    theta_lit = params.coupling / params.theta_domain_bound
    printed, derived = [], []
    for x, y in [(1.0, 0.3), (0.7, -0.45), (1.4, 0.8)]:
        # printed basis: x + (y_p * theta_lit * 4^(1/p)) phi
        yp = y / params.coupling
        xs, ys = printed_reduced_map(params.k, params.n, theta_lit, x, yp, corrected)
        printed += [xs, ys * params.coupling]
        derived += list(reduced_map(params, x, y))
    label = "corrected" if corrected else "as printed"
    # the printed sums cancel heavily, so compare loosely
    return FormulaCheck(f"two-dimensional map ({label})", tuple(printed), tuple(derived), rtol=1e-8)


def formula_report(params: ModelParams) -> list[FormulaCheck]:
    k, n = params.k, params.n
    coeffs = reduced_coefficients(params)
    scale = params.kernel_scale
    derived_thetas = tuple(coeffs.thetas * scale)
    derived_betas = tuple(coeffs.betas / scale)
    checks = [
        FormulaCheck("thresholds theta_{2i+1}", tuple(printed_thresholds(k, n)), derived_thetas),
    ]
    if k % 2:
        checks.append(FormulaCheck(
            "thresholds theta_{2i+1}, (2n+2i+3) reading",
            tuple(printed_thresholds(k, n, "symmetric")),
            derived_thetas,
        ))
    checks.append(FormulaCheck("coefficients beta_{2i+1}", tuple(printed_betas(k, n)), derived_betas))
    checks.append(FormulaCheck(
        "ratio threshold",
        (printed_ratio_threshold(k, n),),
        (ratio_threshold(params) * scale,),
        "uses printed beta and theta tables",
    ))
    checks.append(FormulaCheck(
        "ratio threshold, derived tables",
        (printed_ratio_threshold(k, n, derived_betas, derived_thetas),),
        (ratio_threshold(params) * scale,),
        "same weighted-average form with elimination-derived beta and theta",
    ))
    if k == 2:
        checks.append(FormulaCheck(
            "k=2 threshold (2n+3)/(2(2n+1)) for the 4-inside kernel",
            ((2 * n + 3) / (2 * (2 * n + 1)),),
            (coeffs.theta1 * scale / params.theta_domain_bound,),
            "differs from theta_1 by the factor 4^(1/(2n+1))",
        ))
    if params.coupling != 0:
        checks.append(_map_check(params, corrected=False))
        checks.append(_map_check(params, corrected=True))
    return checks
