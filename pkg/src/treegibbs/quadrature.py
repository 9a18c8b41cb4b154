"""Grid discretization of the Hammerstein operator and an iterative fixed-point search.

This module is the numerical oracle: it never uses the polynomial reduction,
only the kernel, a quadrature rule and iteration.

The basis function ``phi(u) = (u - 1/2)**(1/(2n+1))`` has an algebraic
singularity in its derivative at u = 1/2.  ``build_rule`` removes it with the
substitution ``u = 1/2 + z**(2n+1)`` on each half of [0, 1], after which
every integrand met here is a polynomial in ``z`` and Gauss-Legendre is
exact up to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import ModelParams, NumericsConfig, kernel_eval

OVERFLOW_GUARD = 1e10
STAGNATION_WINDOW = 1000  # iterations without a 1% improvement before giving up
START_AMPLITUDES = (0.25, 0.5, 0.75, 0.95)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    n: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    phi: np.ndarray  # phi at the nodes, i.e. the substituted variable z

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def function(self, values) -> "GridFunction":
        return GridFunction(self.nodes, self.weights, values)

    def constant(self, c: float = 1.0) -> "GridFunction":
        return self.function(np.full(self.nodes.shape, float(c)))

    def affine(self, x: float, y: float) -> "GridFunction":
        """Grid samples of ``x + y * phi``."""
        return self.function(x + y * self.phi)


@dataclass(frozen=True, eq=False)
class GridFunction:
    nodes: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != self.nodes.shape:
            raise ValueError(
                f"values have shape {values.shape}, nodes have shape {self.nodes.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("grid function values must be finite")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return len(self.values)

    def sup_distance(self, other: "GridFunction") -> float:
        return float(np.max(np.abs(self.values - other.values)))


@dataclass(frozen=True)
class Divergence:
    """A Picard run that did not reach a fixed point."""

    reason: str
    iterations: int
    residual: float = float("nan")


@dataclass
class _Trace:
    iterations: int = 0
    residuals: list = field(default_factory=list)


def build_rule(n: int, quad_order: int) -> QuadratureRule:
    if quad_order < 8:
        raise ValueError(f"quad_order must be >= 8, got {quad_order}")
    p = 2 * n + 1
    x, w = np.polynomial.legendre.leggauss(quad_order)
    half = 0.5 ** (1.0 / p)  # z-extent of each half-interval
    # right half: z in [0, half]; the left half is its mirror image
    z_right = 0.5 * half * (x + 1.0)
    w_right = 0.5 * half * w * p * z_right ** (p - 1)
    z = np.concatenate([-z_right[::-1], z_right])
    weights = np.concatenate([w_right[::-1], w_right])
    nodes = 0.5 + z**p
    return QuadratureRule(n, quad_order, _frozen(nodes), _frozen(weights), _frozen(z))


def _check(params: ModelParams, rule: QuadratureRule, f: GridFunction):
    if params.n != rule.n:
        raise ValueError(f"rule built for n={rule.n}, params have n={params.n}")
    if len(f) != len(rule.nodes):
        raise ValueError(f"grid function has {len(f)} values, rule has {len(rule.nodes)} nodes")


def _moments(params: ModelParams, rule: QuadratureRule, values: np.ndarray):
    fk = values**params.k
    return np.dot(rule.weights, fk), np.dot(rule.weights, rule.phi * fk)


def apply_hammerstein(params: ModelParams, rule: QuadratureRule, f: GridFunction) -> GridFunction:
    """``g(t_i) = sum_j w_j K(t_i, u_j) f(u_j)**k`` in O(nodes) via the rank-two kernel."""
    _check(params, rule, f)
    a, b = _moments(params, rule, f.values)
    return rule.function(a + params.coupling * b * rule.phi)


def hammerstein_at(params: ModelParams, rule: QuadratureRule, f: GridFunction, t) -> np.ndarray:
    """Evaluate ``H f`` at arbitrary points of [0, 1] (the integral is still the rule's)."""
    _check(params, rule, f)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    fk = f.values**params.k
    return kernel_eval(params, t[:, None], rule.nodes[None, :]) @ (rule.weights * fk)


def residual_norm(params: ModelParams, rule: QuadratureRule, f: GridFunction) -> float:
    g = apply_hammerstein(params, rule, f)
    return float(np.max(np.abs(g.values - f.values)))


def project_affine(rule: QuadratureRule, f: GridFunction) -> tuple[float, float]:
    """Coefficients ``(x, y)`` of the L2 projection of ``f`` onto span{1, phi}."""
    x = rule.integrate(f.values)
    y = rule.integrate(rule.phi * f.values) / rule.integrate(rule.phi**2)
    return x, y


def _finite(g) -> bool:
    return bool(np.all(np.isfinite(g))) and float(np.max(np.abs(g))) <= OVERFLOW_GUARD


def _anderson_step(g, r, hist_g, hist_r, omega):
    if not hist_g:
        return g + omega * r
    dg = np.column_stack([g - h for h in hist_g])
    dr = np.column_stack([r - h for h in hist_r])
    gamma = np.linalg.lstsq(dr, r, rcond=None)[0]
    return g + omega * r - (dg + omega * dr) @ gamma


def picard_solve(
    params: ModelParams,
    rule: QuadratureRule,
    f0: GridFunction,
    config: NumericsConfig | None = None,
    *,
    depth: int = 2,
    trace: _Trace | None = None,
) -> GridFunction | Divergence:
    """Search for a fixed point ``H f = f`` starting from ``f0``.

    Plain Picard cannot converge to a nonzero fixed point of a Hammerstein
    operator of order k >= 2: ``H(c f) = c**k H(f)`` gives the Jacobian the
    eigenvalue ``k`` along ``f``.  We therefore iterate the mean-normalized
    map ``N(g) = H g / mean(H g)``, whose fixed points are ``H g = mu g``,
    and rescale at the end with ``c = mu**(-1/(k-1))``, which makes
    ``H(c g) - c g = c (N(g) - g)``.

    Steps are damped, ``g <- g + omega (N(g) - g)``, with ``omega`` halved
    whenever the residual grows, and Anderson mixing of the last ``depth``
    iterates (``depth=0`` turns it off).
    """
    config = config or NumericsConfig()
    _check(params, rule, f0)
    k = params.k
    w, ph, gc = rule.weights, rule.phi, params.coupling

    def normalized(g):
        fk = g**k
        a, b = np.dot(w, fk), np.dot(w, ph * fk)
        return (a + gc * b * ph) / a, a

    mean0 = np.dot(w, f0.values)
    if not mean0 > 0:
        return Divergence("start has nonpositive mean", 0)
    g = f0.values / mean0

    omega = 1.0
    hist_g, hist_r = [], []
    ng, mu = normalized(g)
    r = ng - g
    res = best = np.inf
    best_it = 0
    for it in range(1, config.max_picard_iters + 1):
        if not mu > 0:
            return Divergence("mean of H g became nonpositive", it, res)
        c = mu ** (-1.0 / (k - 1))
        res = c * float(np.max(np.abs(r)))
        if trace is not None:
            trace.iterations = it
            trace.residuals.append(res)
        if res < config.residual_tol:
            return rule.function(c * g)
        if res < 0.99 * best:
            best, best_it = res, it
        elif it - best_it > STAGNATION_WINDOW:
            return Divergence("stagnation", it, res)

        g_new = None
        if depth and hist_g:
            g_new = _anderson_step(g, r, hist_g, hist_r, omega)
            if _finite(g_new):
                ng_new, mu_new = normalized(g_new)
                r_new = ng_new - g_new
                if np.max(np.abs(r_new)) > np.max(np.abs(r)):
                    g_new = None
            else:
                g_new = None
            if g_new is None:
                hist_g.clear()
                hist_r.clear()
        if g_new is None:
            g_new = g + omega * r
            if not _finite(g_new):
                return Divergence("overflow", it, res)
            ng_new, mu_new = normalized(g_new)
            r_new = ng_new - g_new
            # a growing residual shortens the step, a shrinking one restores it
            if np.max(np.abs(r_new)) > np.max(np.abs(r)):
                omega = max(0.5 * omega, 1e-3)
            else:
                omega = min(1.0, 2.0 * omega)
        if depth:
            hist_g.append(g)
            hist_r.append(r)
            if len(hist_g) > depth:
                hist_g.pop(0)
                hist_r.pop(0)
        g, ng, mu, r = g_new, ng_new, mu_new, r_new
    return Divergence("iteration limit", config.max_picard_iters, res)


def start_family(params: ModelParams, rule: QuadratureRule) -> list[GridFunction]:
    """Deterministic starts: ``f = 1`` and ``1 +- a * 2**(1/(2n+1)) * phi``."""
    scale = 2.0 ** (1.0 / params.root_order)
    starts = [rule.constant(1.0)]
    for a in START_AMPLITUDES:
        for sign in (1.0, -1.0):
            starts.append(rule.affine(1.0, sign * a * scale))
    return starts


def endpoint_values(params: ModelParams, rule: QuadratureRule, f: GridFunction) -> np.ndarray:
    """Values of a fixed point at t = 0 and t = 1, recovered as ``(H f)(t)``."""
    return hammerstein_at(params, rule, f, [0.0, 1.0])


def multi_start_fixed_points(
    params: ModelParams,
    rule: QuadratureRule,
    config: NumericsConfig | None = None,
    candidates=(),
) -> list[GridFunction]:
    """Distinct positive fixed points reachable from the deterministic start family.

    ``candidates`` are extra starting grid functions (e.g. closed-form
    solutions); they are iterated like any other start.
    """
    config = config or NumericsConfig()
    found: list[tuple[float, GridFunction]] = []
    for f0 in [*start_family(params, rule), *candidates]:
        f = picard_solve(params, rule, f0, config)
        if isinstance(f, Divergence):
            continue
        ends = endpoint_values(params, rule, f)
        if min(f.values.min(), ends.min()) <= 0.0:
            continue
        if any(f.sup_distance(other) < config.cluster_tol for _, other in found):
            continue
        found.append((float(ends[1]), f))
    found.sort(key=lambda item: item[0])
    return [f for _, f in found]


def fixed_point_grid(rule: QuadratureRule, c: float, lam: float) -> GridFunction:
    return rule.affine(c, c * lam)


__all__ = [
    "Divergence",
    "GridFunction",
    "QuadratureRule",
    "apply_hammerstein",
    "build_rule",
    "endpoint_values",
    "fixed_point_grid",
    "hammerstein_at",
    "multi_start_fixed_points",
    "picard_solve",
    "project_affine",
    "residual_norm",
    "start_family",
]
