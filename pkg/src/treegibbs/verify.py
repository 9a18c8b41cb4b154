"""Verification suites: the closed-form reduction checked against the quadrature oracle.

Each suite returns a :class:`SuiteResult`; ``run_suites`` drives them over a
grid of (k, n) pairs.  Tolerances are fixed here and are not tunable.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .model import ModelParams, NumericsConfig, basis_moment
from .phase import _classify_theta, classify, phase_regions, ratio_threshold, sweep
from .quadrature import (
    build_rule,
    fixed_point_grid,
    multi_start_fixed_points,
    project_affine,
    apply_hammerstein,
    residual_norm,
)
from .reduction import (
    ParametricFixedPoint,
    branch_scale,
    build_polynomial,
    positive_root,
    reduced_coefficients,
    reduced_map,
    theta_affine_parts,
)

DEFAULT_KS = tuple(range(2, 8))
DEFAULT_NS = (1, 2, 3)
THETAS_PER_PAIR = 25
THRESHOLD_EXCLUSION = 1e-3

CONSTANT_TOL = 1e-12
MOMENT_TOL = 1e-12
MAP_RTOL = 1e-10
BRANCH_TOL = 1e-8
REFINED_TOL = 1e-9
THETA1_TOL = 1e-12
RATIO_TOL = 1e-10
BOUNDARY_TOL = 1e-8


@dataclass
class SuiteResult:
    name: str
    passed: bool
    worst: float = 0.0
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = f"[{status}] {self.name}: {self.checked} checks, worst {self.worst:.3e}"
        if self.failures:
            msg += f"; first failure: {self.failures[0]}"
        return msg


@dataclass(frozen=True)
class VerifyGrid:
    ks: tuple[int, ...] = DEFAULT_KS
    ns: tuple[int, ...] = DEFAULT_NS
    config: NumericsConfig = NumericsConfig()
    literal_kernel: bool = False

    def pairs(self):
        for k in self.ks:
            for n in self.ns:
                yield k, n

    def params(self, k, n, theta=0.0) -> ModelParams:
        return ModelParams(k, n, theta, literal_kernel=self.literal_kernel)


def theta_grid(n: int, count: int = THETAS_PER_PAIR) -> np.ndarray:
    """``count`` cell midpoints spanning the open domain ``|theta| < 4**(1/(2n+1))``."""
    bound = 4.0 ** (1.0 / (2 * n + 1))
    return bound * (-1.0 + (2.0 * np.arange(count) + 1.0) / count)


def thresholds_of(params: ModelParams) -> list[float]:
    coeffs = reduced_coefficients(params)
    cuts = [coeffs.theta1, ratio_threshold(params)]
    if coeffs.theta_top is not None:
        cuts.append(coeffs.theta_top)
    return cuts


def _result(name, errors: list[tuple[float, bool, str]]) -> SuiteResult:
    failures = [msg for _, ok, msg in errors if not ok]
    worst = max((e for e, _, _ in errors), default=0.0)
    return SuiteResult(name, not failures, worst, len(errors), failures)


def suite_constant(grid: VerifyGrid) -> SuiteResult:
    errors = []
    for k, n in grid.pairs():
        rule = build_rule(n, grid.config.quad_order)
        for theta in theta_grid(n):
            p = grid.params(k, n, theta)
            r = residual_norm(p, rule, rule.constant(1.0))
            errors.append((r, r < CONSTANT_TOL, f"k={k} n={n} theta={theta:.6g}: {r:.3e}"))
    return _result("constant-fixed-point", errors)


def suite_moments(grid: VerifyGrid) -> SuiteResult:
    errors = []
    kmax = max(grid.ks)
    for n in grid.ns:
        rule = build_rule(n, grid.config.quad_order)
        for i in range(kmax + 2):
            exact = basis_moment(n, 2 * i)
            quad = rule.integrate(rule.phi ** (2 * i))
            e = abs(exact - quad)
            errors.append((e, e < MOMENT_TOL, f"n={n} j={2 * i}: {e:.3e}"))
    return _result("moments", errors)


def suite_oracle_equivalence(grid: VerifyGrid) -> SuiteResult:
    errors = []
    xs, ys = np.linspace(0.1, 2.0, 5), np.linspace(-1.0, 1.0, 5)
    for k, n in grid.pairs():
        rule = build_rule(n, grid.config.quad_order)
        bound = 4.0 ** (1.0 / (2 * n + 1))
        for theta in (-0.9 * bound, 0.4 * bound, 0.9 * bound):
            p = grid.params(k, n, theta)
            for x in xs:
                for y in ys:
                    exact = np.array(reduced_map(p, x, y))
                    oracle = np.array(project_affine(rule, apply_hammerstein(p, rule, rule.affine(x, y))))
                    e = np.linalg.norm(exact - oracle) / np.linalg.norm(exact)
                    errors.append((e, e < MAP_RTOL, f"k={k} n={n} theta={theta:.4g} (x,y)=({x:.3g},{y:.3g}): {e:.3e}"))
    return _result("oracle-equivalence", errors)


def suite_root_count(grid: VerifyGrid) -> SuiteResult:
    errors = []
    for k, n in grid.pairs():
        p0 = grid.params(k, n)
        coeffs = reduced_coefficients(p0)
        top = coeffs.theta_top
        scan = np.linspace(-p0.theta_domain_bound, p0.theta_domain_bound, 52)[1:-1]
        for theta in np.concatenate([theta_grid(n), scan]):
            p = p0.with_theta(theta)
            poly = build_polynomial(p)
            root = positive_root(poly, grid.config.root_tol)
            count = 0 if root is None else 1
            expected = int(theta > coeffs.theta1 and (top is None or theta < top))
            ok = count == expected and poly.sign_changes() <= 1
            if root is not None:
                scale = np.max(np.abs(poly.coeffs))
                ok = ok and abs(poly(root)) <= 1e-10 * scale
            errors.append((float(count != expected), ok, f"k={k} n={n} theta={theta:.6g}: {count} roots, expected {expected}"))
    return _result("root-count", errors)


def suite_classification(grid: VerifyGrid) -> SuiteResult:
    errors = []
    for k, n in grid.pairs():
        rule = build_rule(n, grid.config.quad_order)
        p0 = grid.params(k, n)
        cuts = thresholds_of(p0)
        for theta in theta_grid(n):
            if min(abs(theta - c) for c in cuts) <= THRESHOLD_EXCLUSION:
                continue
            p = p0.with_theta(theta)
            expected = classify(p).classification.count
            found = len(multi_start_fixed_points(p, rule, grid.config))
            errors.append((float(found != expected), found == expected,
                           f"k={k} n={n} theta={theta:.6g}: oracle {found}, classify {expected}"))
    return _result("classification", errors)


def suite_branch_residuals(grid: VerifyGrid) -> SuiteResult:
    errors = []
    fine = NumericsConfig(quad_order=2 * grid.config.quad_order)
    for k, n in grid.pairs():
        rule = build_rule(n, grid.config.quad_order)
        rule2 = build_rule(n, fine.quad_order)
        for theta in theta_grid(n):
            p = grid.params(k, n, theta)
            for fp in classify(p).fixed_points:
                if fp.lam == 0.0:
                    continue
                r1 = residual_norm(p, rule, fixed_point_grid(rule, fp.c, fp.lam))
                r2 = residual_norm(p, rule2, fixed_point_grid(rule2, fp.c, fp.lam))
                ok = r1 < BRANCH_TOL and (r2 <= r1 or r2 < REFINED_TOL)
                errors.append((max(r1, r2), ok, f"k={k} n={n} theta={theta:.6g} lam={fp.lam:.6g}: {r1:.3e} -> {r2:.3e}"))
    return _result("branch-residuals", errors)


def suite_threshold_chain(grid: VerifyGrid) -> SuiteResult:
    errors = []
    for k, n in grid.pairs():
        a, b = theta_affine_parts(grid.params(k, n))
        thetas = a[b > 0] / b[b > 0]
        gap = float(np.min(np.diff(thetas))) if len(thetas) > 1 else np.inf
        errors.append((0.0, gap > 0, f"k={k} n={n}: {thetas}"))
    return _result("threshold-chain", errors)


def suite_derived_values(grid: VerifyGrid) -> SuiteResult:
    """theta_1, ratio threshold and the empty two-measure window for k=2, n=1."""
    p = ModelParams(2, 1, 0.0)
    theta1 = reduced_coefficients(p).theta1
    theta_r = ratio_threshold(p)
    e1 = abs(theta1 - 5 * 4 ** (1 / 3) / 6)
    e2 = abs(theta_r - 4 / 3 * 2 ** (2 / 3))
    errors = [
        (e1, e1 < THETA1_TOL, f"theta_1 = {theta1!r}"),
        (e2, e2 < RATIO_TOL, f"ratio threshold = {theta_r!r}"),
        (0.0, theta_r > p.theta_domain_bound, f"ratio threshold {theta_r:.6g} inside domain"),
    ]
    return _result("derived-values", errors)


def boundary_pairs(ks=DEFAULT_KS, ns=DEFAULT_NS, literal_kernel=False):
    """(k, n) pairs whose ratio threshold lies inside the theta domain."""
    out = []
    for k in ks:
        for n in ns:
            p = ModelParams(k, n, 0.0, literal_kernel=literal_kernel)
            if ratio_threshold(p) < p.theta_domain_bound:
                out.append((k, n))
    return out


def suite_positivity_boundary(grid: VerifyGrid) -> SuiteResult:
    """At the ratio threshold the positive root equals ``2**(1/(2n+1))`` and the branches touch zero.

    With the default kernel the threshold never lies inside the domain for
    k <= 7, so the scan falls back to the literal kernel, where it does.
    """
    literal = grid.literal_kernel
    pairs = boundary_pairs(grid.ks, grid.ns, literal)
    if not pairs and not literal:
        literal = True
        pairs = boundary_pairs(grid.ks, grid.ns, literal)
    errors = []
    for k, n in pairs:
        p = ModelParams(k, n, 0.0, literal_kernel=literal)
        p = p.with_theta(ratio_threshold(p))
        lam = positive_root(build_polynomial(p), grid.config.root_tol)
        e = abs(lam - p.positivity_bound)
        excluded = ParametricFixedPoint(branch_scale(p, -lam), -lam, n)
        ok = e < BOUNDARY_TOL and abs(excluded.min_value) < BOUNDARY_TOL
        ok = ok and classify(p).classification.count == 1
        errors.append((e, ok, f"k={k} n={n} literal={literal}: |lam*-2^(1/(2n+1))|={e:.3e}, min={excluded.min_value:.3e}"))
    if not errors:
        errors.append((np.inf, False, "no (k, n) with the ratio threshold inside the domain"))
    return _result("positivity-boundary", errors)


def suite_partition(grid: VerifyGrid, samples: int = 10_000, seed: int = 0) -> SuiteResult:
    rng = np.random.default_rng(seed)
    errors = []
    for k, n in grid.pairs():
        p = grid.params(k, n)
        regions = phase_regions(p)
        coeffs = reduced_coefficients(p)
        cuts = (coeffs.theta1, ratio_threshold(p), coeffs.theta_top)
        thetas = rng.uniform(-p.theta_domain_bound, p.theta_domain_bound, samples)
        thetas = np.concatenate([thetas, [c for c in thresholds_of(p) if abs(c) < p.theta_domain_bound]])
        bad = 0
        for theta in thetas:
            owners = [r for r in regions if r.contains(theta)]
            if len(owners) != 1 or owners[0].classification is not _classify_theta(theta, *cuts):
                bad += 1
        errors.append((float(bad), bad == 0, f"k={k} n={n}: {bad} theta values not claimed by exactly one region"))
    return _result("partition", errors)


def suite_determinism(grid: VerifyGrid) -> SuiteResult:
    from .io import write_sweep

    errors = []
    for k, n in list(grid.pairs())[:3]:
        p = grid.params(k, n)
        outputs = []
        for _ in range(2):
            buf = io.StringIO()
            rows = sweep(p, theta_grid(n, 20), grid.config)
            write_sweep(buf, p, rows, "csv")
            outputs.append(buf.getvalue())
        errors.append((0.0, outputs[0] == outputs[1], f"k={k} n={n}: sweep output differs between runs"))
    return _result("determinism", errors)


SUITES: dict[str, Callable[[VerifyGrid], SuiteResult]] = {
    "constant-fixed-point": suite_constant,
    "moments": suite_moments,
    "oracle-equivalence": suite_oracle_equivalence,
    "root-count": suite_root_count,
    "classification": suite_classification,
    "branch-residuals": suite_branch_residuals,
    "threshold-chain": suite_threshold_chain,
    "derived-values": suite_derived_values,
    "positivity-boundary": suite_positivity_boundary,
    "partition": suite_partition,
    "determinism": suite_determinism,
}


def run_suites(grid: VerifyGrid | None = None, only=None) -> list[SuiteResult]:
    grid = grid or VerifyGrid()
    names = list(SUITES) if not only else list(only)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[name](grid) for name in names]
