"""Exact finite-dimensional reduction of the fixed-point problem.

Every image of the Hammerstein operator lies in span{1, phi}, so a fixed
point has the form ``f = x + y*phi`` and the operator acts on ``(x, y)``
through a polynomial map.  Writing ``y = lam * x`` and eliminating the scale
``x`` leaves an even polynomial in ``lam`` whose coefficients are affine in
``theta``; its sign pattern decides how many fixed points there are.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as P

from .model import ModelParams, basis_moment, odd_root


class InconsistencyError(ArithmeticError):
    """The reduction produced something its structure rules out."""


def _binomial_moments(params: ModelParams):
    """``A_j = C(k,j) m_j`` and ``B_j = C(k,j) m_{j+1}`` for j = 0..k."""
    k, n = params.k, params.n
    a = np.array([comb(k, j) * basis_moment(n, j) for j in range(k + 1)])
    b = np.array([comb(k, j) * basis_moment(n, j + 1) for j in range(k + 1)])
    return a, b


def reduced_map(params: ModelParams, x: float, y: float) -> tuple[float, float]:
    """Coefficients of ``H(x + y*phi)`` in the basis {1, phi}."""
    a, b = _binomial_moments(params)
    j = np.arange(params.k + 1)
    terms = x ** (params.k - j) * y**j
    return float(a @ terms), float(params.coupling * (b @ terms))


def scale_sum(params: ModelParams, lam: float) -> float:
    """``S(lam) = sum_{j even} C(k,j) lam^j alpha_j``, the x-component of the map at (1, lam)."""
    a, _ = _binomial_moments(params)
    return float(P.polyval(lam, a))


@dataclass(frozen=True)
class EvenPolynomial:
    """``sum_j coeffs[j] * lam**(2j)``."""

    n_param: int
    k: int
    coeffs: np.ndarray

    @property
    def s(self) -> int:
        return self.k // 2

    @property
    def parity(self) -> str:
        return "even" if self.k % 2 == 0 else "odd"

    @property
    def degree(self) -> int:
        return 2 * (len(self.coeffs) - 1)

    def __call__(self, lam):
        return P.polyval(np.square(lam), self.coeffs)

    def full_coefficients(self) -> np.ndarray:
        """Coefficients in ``lam`` (odd powers zero), lowest first."""
        out = np.zeros(self.degree + 1)
        out[::2] = self.coeffs
        return out

    def sign_changes(self) -> int:
        signs = np.sign(self.coeffs[self.coeffs != 0])
        return int(np.count_nonzero(signs[1:] != signs[:-1]))


def _elimination_coefficients(params: ModelParams, coupling: float) -> np.ndarray:
    # fixed point: x = x^k S(lam) and lam x = coupling x^k T(lam)
    #   =>  lam S(lam) - coupling T(lam) = 0, an odd polynomial; divide by lam
    a, b = _binomial_moments(params)
    odd = P.polysub(P.polymulx(a), coupling * b)
    if np.any(odd[0::2] != 0):
        raise InconsistencyError("eliminated polynomial is not odd in lam")
    return odd[1::2]


def build_polynomial(params: ModelParams, theta: float | None = None) -> EvenPolynomial:
    """Phase polynomial whose positive roots are the ratios ``y/x`` of nonconstant fixed points.

    ``theta`` overrides ``params.theta`` without any domain check.
    """
    theta = params.theta if theta is None else theta
    coeffs = _elimination_coefficients(params, theta * params.kernel_scale)
    return EvenPolynomial(params.n, params.k, coeffs)


def theta_affine_parts(params: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """``(a, b)`` with phase-polynomial coefficients ``a - theta * b``."""
    a = build_polynomial(params, 0.0).coeffs
    return a, a - build_polynomial(params, 1.0).coeffs


@dataclass(frozen=True)
class ReducedCoefficients:
    """Moment and threshold tables.

    ``alphas[i]`` is the even moment alpha_{2i}; ``betas[i]`` and
    ``thetas[i]`` are beta_{2i+1} and theta_{2i+1}, so that the phase
    polynomial reads ``sum_i betas[i] (thetas[i] - theta) lam^{2i}`` plus,
    for even k, the leading term ``alphas[s] lam^{2s}``.
    """

    k: int
    n: int
    alphas: np.ndarray
    betas: np.ndarray
    thetas: np.ndarray

    @property
    def theta1(self) -> float:
        return float(self.thetas[0])

    @property
    def theta_top(self) -> float | None:
        """theta_{2s+1}, the upper end of the nontrivial window for odd k."""
        return float(self.thetas[-1]) if self.k % 2 else None


def reduced_coefficients(params: ModelParams) -> ReducedCoefficients:
    k, n = params.k, params.n
    s = k // 2
    alphas = np.array([basis_moment(n, 2 * i) for i in range(s + 2)])
    a, b = theta_affine_parts(params)
    nz = b > 0
    betas = b[nz]
    thetas = a[nz] / b[nz]
    if np.any(np.diff(thetas) <= 0):
        raise InconsistencyError(f"threshold sequence not increasing: {thetas}")
    return ReducedCoefficients(k, n, alphas, betas, thetas)


def positive_root(poly: EvenPolynomial, root_tol: float = 1e-12) -> float | None:
    """Unique positive root of ``poly`` by Descartes count and bisection, or None."""
    changes = poly.sign_changes()
    if changes == 0:
        return None
    if changes > 1:
        raise InconsistencyError(
            f"phase polynomial has {changes} coefficient sign changes: {poly.coeffs}"
        )
    c = np.trim_zeros(poly.coeffs, "b")
    # Cauchy bound in tau = lam^2
    tau_max = 1.0 + np.max(np.abs(c[:-1])) / abs(c[-1])
    lo, hi = 0.0, float(np.sqrt(tau_max))
    lo_positive = poly(lo) > 0
    if (poly(hi) > 0) == lo_positive:
        raise InconsistencyError("phase polynomial does not change sign on the Cauchy bracket")
    while hi - lo > root_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        value = poly(mid)
        if value == 0.0:
            return mid
        if (value > 0) == lo_positive:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class ParametricFixedPoint:
    """``f(t) = c * (1 + lam * phi(t))``."""

    c: float
    lam: float
    n: int

    @property
    def coefficients(self) -> tuple[float, float]:
        return self.c, self.c * self.lam

    def __call__(self, t):
        z = odd_root(np.asarray(t, dtype=float) - 0.5, 2 * self.n + 1)
        return self.c * (1.0 + self.lam * z)

    @property
    def min_value(self) -> float:
        """Minimum over [0, 1], attained at an endpoint."""
        return self.c * (1.0 - abs(self.lam) * 0.5 ** (1.0 / (2 * self.n + 1)))

    @property
    def is_positive(self) -> bool:
        return self.min_value > 0


def branch_scale(params: ModelParams, lam: float) -> float:
    """Scale ``c`` with ``c = c^k S(lam)``, i.e. ``S(lam)**(-1/(k-1))``."""
    sv = scale_sum(params, lam)
    if not sv > 0:
        raise InconsistencyError(f"S({lam}) = {sv} is not positive")
    return sv ** (-1.0 / (params.k - 1))


def reconstruct_fixed_points(
    params: ModelParams, lambda_star: float | None
) -> list[ParametricFixedPoint]:
    """The constant solution plus every strictly positive branch ``c (1 +- lambda_star phi)``.

    The two branches are mirror images under ``t -> 1 - t`` and share the
    same minimum, so they are kept or dropped together.
    """
    out = [ParametricFixedPoint(1.0, 0.0, params.n)]
    if lambda_star is None:
        return out
    for lam in (lambda_star, -lambda_star):
        fp = ParametricFixedPoint(branch_scale(params, lam), lam, params.n)
        if fp.is_positive:
            out.append(fp)
    return out
