"""Acceptance criteria, one test per criterion.

Each test records a ``[PASS]``/``[FAIL]`` line that is printed in the pytest
terminal summary.  Run directly (``python tests/test_acceptance.py``) to get
just the lines.
"""

import filecmp
import subprocess
import sys

import pytest

from treegibbs.model import ModelParams
from treegibbs.phase import classify, ratio_threshold
from treegibbs.reduction import ParametricFixedPoint, branch_scale, build_polynomial, positive_root, reduced_coefficients
from treegibbs.verify import VerifyGrid, boundary_pairs, run_suites

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

GRID = VerifyGrid()
LITERAL_GRID = VerifyGrid(literal_kernel=True)


def record(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def _suite(number, name, suite, grid=GRID):
    (res,) = run_suites(grid, [suite])
    detail = f"{res.checked} checks, worst {res.worst:.3e}"
    if res.failures:
        detail += f"; {len(res.failures)} failures, first: {res.failures[0]}"
    assert record(number, name, res.passed, detail), detail


def test_01_constant_fixed_point():
    _suite(1, "constant fixed point residual < 1e-12", "constant-fixed-point")


def test_02_moment_closed_forms():
    _suite(2, "moment closed forms vs quadrature to 1e-12", "moments")


def test_03_reduced_map_oracle_equivalence():
    _suite(3, "reduced map vs quadrature projection to 1e-10 relative", "oracle-equivalence")


def test_04_root_count_law():
    _suite(4, "root-count law, zero violations", "root-count")


def test_05_classification_matches_oracle():
    _suite(5, "classification count = oracle multi-start count", "classification")


def test_05b_classification_matches_oracle_literal_kernel():
    # same criterion under the literal kernel, where the ratio threshold is inside the domain
    _suite("5b", "classification count = oracle count (literal kernel)", "classification", LITERAL_GRID)


def test_06_branch_residuals():
    _suite(6, "branch residuals < 1e-8 at q48, improving or < 1e-9 at q96", "branch-residuals")


def test_07_threshold_chain():
    _suite(7, "threshold chain strictly increasing", "threshold-chain")


def test_08_derived_values():
    p = ModelParams(2, 1, 0.0)
    theta1 = reduced_coefficients(p).theta1
    theta_r = ratio_threshold(p)
    e1 = abs(theta1 - 5 * 4 ** (1 / 3) / 6)
    e2 = abs(theta_r - (4 / 3) * 2 ** (2 / 3))
    empty = theta_r > p.theta_domain_bound
    ok = e1 < 1e-12 and e2 < 1e-10 and empty
    detail = (f"theta_1 err {e1:.1e}, ratio threshold err {e2:.1e}, "
              f"two-measure window empty: {empty} ({theta_r:.6f} > {p.theta_domain_bound:.6f})")
    assert record(8, "k=2 n=1 derived values", ok, detail), detail


def test_09_positivity_boundary():
    default = boundary_pairs()
    literal = boundary_pairs(literal_kernel=True)
    kernel = "default" if default else "literal"
    pairs = default or literal
    worst_lam, worst_min, count_ok = 0.0, 0.0, True
    for k, n in pairs:
        p = ModelParams(k, n, 0.0, literal_kernel=not default)
        p = p.with_theta(ratio_threshold(p))
        lam = positive_root(build_polynomial(p))
        worst_lam = max(worst_lam, abs(lam - p.positivity_bound))
        res = classify(p)
        # min over [0, 1] of the -lam* branch; zero up to rounding at the boundary
        excluded = ParametricFixedPoint(branch_scale(p, -lam), -lam, n)
        worst_min = max(worst_min, excluded.min_value)
        count_ok = count_ok and res.classification.count == 1
    ok = bool(pairs) and worst_lam < 1e-8 and worst_min <= 1e-8 and count_ok
    detail = (f"{len(default)} default-kernel pairs with the threshold inside the domain; "
              f"checked {len(pairs)} {kernel}-kernel pairs, max |lam*-2^(1/(2n+1))| {worst_lam:.1e}, "
              f"max excluded-branch min {worst_min:.1e}")
    assert record(9, "positivity boundary", ok, detail), detail


def test_10_determinism(tmp_path):
    args = ["sweep", "--k", "3", "--n", "1", "--theta-min", "0", "--theta-max", "1.5",
            "--steps", "50", "--verify"]
    outs = []
    for i, fmt in enumerate(["csv", "csv", "json", "json"]):
        out = tmp_path / f"run{i}.{fmt}"
        proc = subprocess.run([sys.executable, "-m", "treegibbs.cli", *args, "--format", fmt, "-o", str(out)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outs.append(out)
    same = (filecmp.cmp(outs[0], outs[1], shallow=False)
            and filecmp.cmp(outs[2], outs[3], shallow=False)
            and filecmp.cmp(outs[0].with_suffix(".regions.csv"), outs[1].with_suffix(".regions.csv"), shallow=False))
    assert record(10, "repeated sweeps byte-identical", same, "CSV, regions CSV and JSON compared"), "outputs differ"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
