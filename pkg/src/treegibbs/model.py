"""Model parameters, kernel and basis moments.

The spin model lives on a Cayley tree of order ``k`` with spins in [0, 1].
Its translation-invariant Gibbs measures are the positive fixed points of
the Hammerstein operator

    (H f)(t) = int_0^1 K(t, u) f(u)^k du

with the rank-two kernel ``K(t, u) = 1 + g * phi(t) * phi(u)``, where
``phi(t) = (t - 1/2)**(1/(2n+1))`` is the real (signed) odd root.

Two normalizations of the coupling are supported:

* ``literal_kernel=False`` (default): ``g = theta``.  This is the
  normalization under which the thresholds ``theta_1 < theta_3 < ...`` and
  the domain ``|theta| < 4**(1/(2n+1))`` hold as closed forms.
* ``literal_kernel=True``: ``K(t, u) = 1 + theta * root(4 (t-1/2)(u-1/2))``,
  i.e. ``g = theta * 4**(1/(2n+1))``.  Every threshold is then divided by
  ``4**(1/(2n+1))``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np


class KernelPositivityWarning(UserWarning):
    """The kernel takes non-positive values on [0, 1]^2."""


def odd_root(x, m: int):
    """Real m-th root of ``x`` for odd ``m``; works on scalars and arrays."""
    if m < 1 or m % 2 == 0:
        raise ValueError(f"odd_root needs an odd positive order, got {m}")
    if m == 1:
        return x
    if np.ndim(x) == 0:
        x = float(x)
        return math.copysign(abs(x) ** (1.0 / m), x)
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** (1.0 / m)


def basis_moment(n: int, j: int) -> float:
    """``int_0^1 phi(u)**j du`` for ``phi(u) = (u - 1/2)**(1/(2n+1))``.

    Odd ``j`` vanish by symmetry about u = 1/2; even ``j`` give
    ``(2n+1)/(2n+j+1) * (1/2)**(j/(2n+1))``.
    """
    if j < 0:
        raise ValueError("moment index must be nonnegative")
    if j % 2:
        return 0.0
    p = 2 * n + 1
    return p / (p + j) * 0.5 ** (j / p)


@dataclass(frozen=True)
class NumericsConfig:
    quad_order: int = 48
    residual_tol: float = 1e-9
    root_tol: float = 1e-12
    cluster_tol: float = 1e-6
    max_picard_iters: int = 10000

    def __post_init__(self):
        if self.quad_order < 8:
            raise ValueError(f"quad_order must be >= 8, got {self.quad_order}")
        for name in ("residual_tol", "root_tol", "cluster_tol", "max_picard_iters"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class ModelParams:
    """Tree order ``k``, exponent parameter ``n`` and coupling ``theta``.

    ``formal=True`` skips the domain check on ``theta`` so that polynomials
    and thresholds can be evaluated outside the physical range.
    """

    k: int
    n: int
    theta: float
    literal_kernel: bool = False
    formal: bool = False

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"tree order k must be an integer >= 2, got {self.k}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"exponent parameter n must be an integer >= 1, got {self.n}")
        if not math.isfinite(self.theta):
            raise ValueError(f"theta must be finite, got {self.theta}")
        if not self.formal and not abs(self.theta) < self.theta_domain_bound:
            raise ValueError(
                f"theta={self.theta!r} outside the domain "
                f"(-{self.theta_domain_bound:.6g}, {self.theta_domain_bound:.6g})"
            )

    @property
    def s(self) -> int:
        return self.k // 2

    @property
    def even(self) -> bool:
        return self.k % 2 == 0

    @property
    def root_order(self) -> int:
        return 2 * self.n + 1

    @property
    def theta_domain_bound(self) -> float:
        return 4.0 ** (1.0 / (2 * self.n + 1))

    @property
    def positivity_bound(self) -> float:
        """``2**(1/(2n+1))``: ``1 + lam*phi`` is positive on [0,1] iff ``|lam|`` is below it."""
        return 2.0 ** (1.0 / (2 * self.n + 1))

    @property
    def kernel_scale(self) -> float:
        return self.theta_domain_bound if self.literal_kernel else 1.0

    @property
    def coupling(self) -> float:
        """Coefficient ``g`` of ``phi(t) phi(u)`` in the kernel."""
        return self.theta * self.kernel_scale

    def with_theta(self, theta: float, *, formal: bool | None = None) -> "ModelParams":
        return replace(self, theta=float(theta), formal=self.formal if formal is None else formal)


def phi(params: ModelParams, t):
    """Basis function ``(t - 1/2)**(1/(2n+1))``."""
    return odd_root(np.asarray(t, dtype=float) - 0.5, params.root_order)


def kernel_eval(params: ModelParams, t, u):
    """Evaluate ``K(t, u)``; broadcasts over array arguments."""
    p = params.root_order
    if params.literal_kernel:
        prod = 4.0 * (np.asarray(t, dtype=float) - 0.5) * (np.asarray(u, dtype=float) - 0.5)
        val = 1.0 + params.theta * odd_root(prod, p)
    else:
        val = 1.0 + params.theta * phi(params, t) * phi(params, u)
    return float(val) if np.ndim(val) == 0 else val


def validate_kernel_positivity(params: ModelParams) -> bool:
    """True iff ``K > 0`` on all of [0, 1]^2.

    The extreme of ``phi(t) phi(u)`` is ``+-(1/4)**(1/(2n+1))`` at the corners,
    so positivity is ``|g| < 4**(1/(2n+1))``.
    """
    return abs(params.coupling) < params.theta_domain_bound


def check_kernel_positivity(params: ModelParams) -> bool:
    ok = validate_kernel_positivity(params)
    if not ok:
        warnings.warn(
            f"kernel is not positive on [0,1]^2 for theta={params.theta:g} (n={params.n}); "
            "the interaction log(K) is undefined there",
            KernelPositivityWarning,
            stacklevel=2,
        )
    return ok
