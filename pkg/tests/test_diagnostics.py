import pytest

from treegibbs.diagnostics import (
    formula_report,
    printed_reduced_map,
    printed_thresholds,
)
from treegibbs.model import ModelParams
from treegibbs.reduction import reduced_coefficients, reduced_map


def _by_name(checks):
    return {c.name: c for c in checks}


@pytest.mark.parametrize("k", [2, 4, 6])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_even_k_closed_forms_match(k, n):
    checks = _by_name(formula_report(ModelParams(k, n, 0.5)))
    assert checks["thresholds theta_{2i+1}"].matches
    assert checks["coefficients beta_{2i+1}"].matches
    assert checks["ratio threshold"].matches
    assert checks["two-dimensional map (corrected)"].matches
    assert not checks["two-dimensional map (as printed)"].matches


@pytest.mark.parametrize("k", [3, 5, 7])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_odd_k_readings(k, n):
    checks = _by_name(formula_report(ModelParams(k, n, 0.5)))
    assert checks["thresholds theta_{2i+1}, (2n+2i+3) reading"].matches
    # the printed factor agrees only when s = n
    assert checks["thresholds theta_{2i+1}"].matches == (k // 2 == n)
    assert not checks["coefficients beta_{2i+1}"].matches
    assert not checks["ratio threshold"].matches
    assert checks["ratio threshold, derived tables"].matches


@pytest.mark.parametrize("n", [1, 2, 3])
def test_prior_work_threshold_for_k2(n):
    checks = _by_name(formula_report(ModelParams(2, n, 0.5)))
    assert checks["k=2 threshold (2n+3)/(2(2n+1)) for the 4-inside kernel"].matches
    lit = reduced_coefficients(ModelParams(2, n, 0.0, literal_kernel=True))
    assert lit.theta1 == pytest.approx((2 * n + 3) / (2 * (2 * n + 1)), rel=1e-13)


def test_printed_thresholds_k2_n1():
    assert printed_thresholds(2, 1)[0] == pytest.approx(5 * 4 ** (1 / 3) / 6)


def test_corrected_map_matches_derived():
    p = ModelParams(3, 2, 0.9, literal_kernel=True)
    g = p.coupling
    x, y = 0.8, 0.35
    xs, ys = printed_reduced_map(3, 2, p.theta, x, y / g, corrected=True)
    assert (xs, ys * g) == pytest.approx(reduced_map(p, x, y), rel=1e-8)


def test_report_serializes():
    for c in formula_report(ModelParams(3, 1, 0.5)):
        d = c.as_dict()
        assert set(d) == {"name", "printed", "derived", "matches", "note"}


def test_zero_coupling_skips_map_checks():
    names = [c.name for c in formula_report(ModelParams(2, 1, 0.0))]
    assert not any("map" in n for n in names)
