"""Closed-form layer: exponents, parameter maps, best constants, extremals.

Angular convention
------------------
All integrals over R^n are written as ``omega(n) * int_0^inf f(r) r^(n-1) dr``
with ``omega(n) = |S^{n-1}| = 2 pi^(n/2) / Gamma(n/2)``, the surface area of
the unit sphere of R^n.  The Sobolev constant uses the area of the unit
n-sphere in R^(n+1), i.e. ``sphere_area(n + 1)``.  Both choices were fixed by
matching the closed forms against quadrature of the Rayleigh quotient on the
explicit extremals.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DegenerateIndicial, DiscriminantNegative, OutOfRange

__all__ = [
    "Location",
    "ExponentKind",
    "ProblemParams",
    "Exponents",
    "CknParams",
    "HardyParams",
    "Extremal",
    "sphere_area",
    "beta_exponents",
    "alpha_exponents",
    "critical_exponent",
    "ckn_to_hardy",
    "hardy_to_ckn",
    "mu_sobolev",
    "mu_hardy_sobolev",
    "mu_gamma_s",
    "best_constant",
    "extremal_interior",
    "extremal_multiplier",
    "halfspace_linear_solution",
    "critical_dimension_interior",
    "critical_dimension_boundary",
    "gamma_hardy_cone",
]


class Location(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"


class ExponentKind(str, enum.Enum):
    BETA_INTERIOR = "BetaInterior"
    ALPHA_BOUNDARY = "AlphaBoundary"


def _check_dimension(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise OutOfRange(f"dimension must be an integer >= 3, got {n!r}")
    return int(n)


def _check_finite(**kw) -> None:
    for name, val in kw.items():
        if not math.isfinite(val):
            raise OutOfRange(f"{name} must be finite, got {val!r}")


@dataclass(frozen=True)
class ProblemParams:
    """The triple (n, gamma, s) together with the location of the singularity."""

    n: int
    gamma: float
    s: float
    location: Location = Location.INTERIOR

    def __post_init__(self):
        object.__setattr__(self, "n", _check_dimension(self.n))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "location", Location(self.location))
        _check_finite(gamma=self.gamma, s=self.s)
        if not 0.0 <= self.s <= 2.0:
            raise OutOfRange(f"s must lie in [0, 2], got {self.s}")
        if self.gamma >= self.gamma_hardy:
            raise OutOfRange(
                f"gamma={self.gamma} must be below {self.gamma_hardy} "
                f"for a {self.location.value.lower()} singularity"
            )

    @property
    def gamma_hardy(self) -> float:
        n = self.n
        if self.location is Location.INTERIOR:
            return (n - 2) ** 2 / 4.0
        return n * n / 4.0

    @property
    def p(self) -> float:
        return critical_exponent(self.n, self.s)


@dataclass(frozen=True)
class Exponents:
    """Pair of roots of the indicial quadratic, ``minus <= plus``."""

    minus: float
    plus: float
    kind: ExponentKind
    degenerate: bool = False

    @property
    def gap(self) -> float:
        return self.plus - self.minus


class HardyParams(NamedTuple):
    gamma: float
    s: float
    q: float


@dataclass(frozen=True)
class CknParams:
    a: float
    b: float
    q: float


def sphere_area(n: int) -> float:
    """Surface area of the unit sphere of R^n, ``2 pi^(n/2) / Gamma(n/2)``."""
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n))


def _roots(half_sum: float, gamma: float, disc_bound: float, kind: ExponentKind) -> Exponents:
    disc = disc_bound - gamma
    if disc < 0.0:
        raise DiscriminantNegative(
            f"gamma={gamma} exceeds {disc_bound}; the indicial roots are complex"
        )
    root = math.sqrt(disc)
    minus = half_sum - root
    # product form keeps minus accurate when root ~ half_sum
    if minus != 0.0 and half_sum > 0.0 and root > 0.5 * half_sum:
        minus = gamma / (half_sum + root)
    return Exponents(minus, half_sum + root, kind, degenerate=(disc == 0.0))


def beta_exponents(n: int, gamma: float) -> Exponents:
    """Exponents beta such that ``|x|^-beta`` solves L_gamma u = 0 away from 0.

    Parameters
    ----------
    n : int
        Dimension, at least 3.
    gamma : float
        Hardy coefficient, at most ``(n-2)^2/4``.

    Returns
    -------
    Exponents
        ``beta_-`` and ``beta_+`` with ``beta_- + beta_+ = n-2`` and
        ``beta_- * beta_+ = gamma``.
    """
    n = _check_dimension(n)
    _check_finite(gamma=gamma)
    return _roots((n - 2) / 2.0, float(gamma), (n - 2) ** 2 / 4.0, ExponentKind.BETA_INTERIOR)


def alpha_exponents(n: int, gamma: float) -> Exponents:
    """Exponents alpha such that ``x_1 |x|^-alpha`` solves L_gamma u = 0 in the half-space."""
    n = _check_dimension(n)
    _check_finite(gamma=gamma)
    return _roots(n / 2.0, float(gamma), n * n / 4.0, ExponentKind.ALPHA_BOUNDARY)


def critical_exponent(n: int, s: float) -> float:
    """Critical Hardy-Sobolev exponent ``2(n-s)/(n-2)``."""
    n = _check_dimension(n)
    if not 0.0 <= s <= 2.0:
        raise OutOfRange(f"s must lie in [0, 2], got {s}")
    return 2.0 * (n - s) / (n - 2)


def ckn_to_hardy(a: float, b: float, n: int) -> HardyParams:
    """Map Caffarelli-Kohn-Nirenberg parameters (a, b) to (gamma, s, q)."""
    n = _check_dimension(n)
    _check_finite(a=a, b=b)
    d = b - a
    # absorb rounding in b - a (a few ulps of the operands)
    slack = 8.0 * np.finfo(float).eps * max(abs(a), abs(b), 1.0)
    if -slack <= d < 0.0 or 1.0 < d <= 1.0 + slack:
        d = min(max(d, 0.0), 1.0)
    if not a < (n - 2) / 2.0:
        raise OutOfRange(f"a={a} must be below (n-2)/2={(n - 2) / 2}")
    if not 0.0 <= d <= 1.0:
        raise OutOfRange(f"b-a={d} must lie in [0, 1]")
    q = 2.0 * n / (n - 2 + 2.0 * d)
    return HardyParams(a * (n - 2 - a), d * q, q)


def hardy_to_ckn(gamma: float, s: float, n: int) -> CknParams:
    """Inverse of :func:`ckn_to_hardy` on the branch ``a = beta_-(gamma)``."""
    n = _check_dimension(n)
    _check_finite(gamma=gamma, s=s)
    if not gamma < (n - 2) ** 2 / 4.0:
        raise OutOfRange(f"gamma={gamma} must be below (n-2)^2/4")
    if not 0.0 <= s <= 2.0:
        raise OutOfRange(f"s must lie in [0, 2], got {s}")
    a = beta_exponents(n, gamma).minus
    d = s * (n - 2) / (2.0 * (n - s))
    return CknParams(a, a + d, 2.0 * n / (n - 2 + 2.0 * d))


def mu_sobolev(n: int) -> float:
    """Best constant of the Sobolev inequality on R^n."""
    n = _check_dimension(n)
    return n * (n - 2) / 4.0 * sphere_area(n + 1) ** (2.0 / n)


def mu_hardy_sobolev(n: int, s: float) -> float:
    """Best constant of the Hardy-Sobolev inequality (gamma = 0, 0 < s < 2)."""
    n = _check_dimension(n)
    if not 0.0 < s < 2.0:
        raise OutOfRange(f"s must lie in (0, 2), got {s}")
    k = 2.0 - s
    log_inner = (
        math.log(sphere_area(n) / k)
        + 2.0 * math.lgamma((n - s) / k)
        - math.lgamma(2.0 * (n - s) / k)
    )
    return (n - 2) * (n - s) * math.exp(k / (n - s) * log_inner)


def mu_gamma_s(n: int, gamma: float, s: float) -> float:
    """Best constant of the Hardy-Schrodinger Sobolev inequality on R^n.

    Valid for ``0 <= gamma < (n-2)^2/4`` and ``0 <= s < 2``.  Gamma functions
    are evaluated through ``lgamma`` so large dimensions do not overflow.
    """
    n = _check_dimension(n)
    _check_finite(gamma=gamma, s=s)
    if not 0.0 <= gamma < (n - 2) ** 2 / 4.0:
        raise OutOfRange(f"gamma={gamma} must lie in [0, (n-2)^2/4)")
    if not 0.0 <= s < 2.0:
        raise OutOfRange(f"s must lie in [0, 2), got {s}")
    p = critical_exponent(n, s)
    k = 2.0 - s
    expo = k / (n - s)
    log_d = (
        expo * math.log(sphere_area(n))
        + (2.0 / p) * math.log(p / 2.0)
        + expo
        * (
            math.lgamma((n - s) / k)
            + math.lgamma((n + 2 - 2 * s) / k)
            - math.lgamma(2.0 * (n - s) / k)
        )
    )
    return math.exp((1.0 / p + 0.5) * math.log((n - 2) ** 2 - 4.0 * gamma) + log_d)


def best_constant(n: int, gamma: float, s: float) -> tuple[float, str]:
    """Dispatch to the right closed form; returns ``(value, formula_name)``."""
    if gamma == 0.0 and s == 0.0:
        return mu_sobolev(n), "sobolev"
    if gamma == 0.0 and 0.0 < s < 2.0:
        return mu_hardy_sobolev(n, s), "hardy_sobolev"
    if gamma == 0.0 and s == 2.0:
        n = _check_dimension(n)
        return (n - 2) ** 2 / 4.0, "hardy"
    return mu_gamma_s(n, gamma, s), "gamma_s"


def extremal_multiplier(n: int, gamma: float, s: float) -> float:
    """Constant M with ``-Delta U - gamma U/|x|^2 = M U^(p-1)/|x|^s`` for the extremal U."""
    n = _check_dimension(n)
    return (n - s) * ((n - 2) ** 2 - 4.0 * gamma) / (n - 2)


@dataclass(frozen=True)
class Extremal:
    """Explicit extremal profile ``r -> eps^{-(n-2)/2} U(r/eps)``."""

    n: int
    gamma: float
    s: float
    eps: float = 1.0

    def __post_init__(self):
        # validates the parameter range
        mu_gamma_s(self.n, self.gamma, self.s)
        if not (math.isfinite(self.eps) and self.eps > 0.0):
            raise OutOfRange(f"eps must be positive, got {self.eps}")

    @property
    def exponents(self) -> Exponents:
        return beta_exponents(self.n, self.gamma)

    @property
    def multiplier(self) -> float:
        return extremal_multiplier(self.n, self.gamma, self.s)

    def __call__(self, r):
        n, s = self.n, self.s
        ex = self.exponents
        k = 2.0 - s
        lx = np.log(np.asarray(r, dtype=float) / self.eps)
        lu = -(n - 2) / k * np.logaddexp(k * ex.minus / (n - 2) * lx, k * ex.plus / (n - 2) * lx)
        return np.exp(lu - 0.5 * (n - 2) * math.log(self.eps))

    def on_grid(self, grid, boundary="WholeSpace"):
        """Sample the profile on a :class:`~hardy_ckn.radial.RadialGrid`."""
        from .radial import RadialFunction

        return RadialFunction(grid, self(grid.nodes), boundary)


def extremal_interior(n: int, gamma: float, s: float, eps: float = 1.0) -> Extremal:
    """Return the explicit extremal for the whole-space constant as an evaluator."""
    return Extremal(_check_dimension(n), float(gamma), float(s), float(eps))


def halfspace_linear_solution(
    n: int, gamma: float, lambda_minus: float, lambda_plus: float
) -> Callable[[np.ndarray], np.ndarray]:
    """Positive solutions of L_gamma u = 0 on the half-space {x_1 > 0}.

    Returns a function of points ``x`` with shape ``(..., n)`` evaluating
    ``lambda_- x_1 |x|^-alpha_- + lambda_+ x_1 |x|^-alpha_+``.
    """
    n = _check_dimension(n)
    if not gamma < n * n / 4.0:
        raise OutOfRange(f"gamma={gamma} must be below n^2/4")
    if lambda_minus < 0 or lambda_plus < 0:
        raise OutOfRange("lambda_minus and lambda_plus must be nonnegative")
    ex = alpha_exponents(n, gamma)

    def evaluate(x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != n:
            raise OutOfRange(f"points must have last dimension {n}")
        rr = np.linalg.norm(x, axis=-1)
        x1 = x[..., 0]
        return x1 * (lambda_minus * rr ** (-ex.minus) + lambda_plus * rr ** (-ex.plus))

    return evaluate


def critical_dimension_interior(gamma: float) -> float:
    """Dimension below which mass positivity is needed, interior singularity."""
    if gamma >= -1.0:
        return 2.0 * math.sqrt(gamma + 1.0) + 2.0
    return 2.0


def critical_dimension_boundary(gamma: float) -> float:
    """Conjectured critical dimension for a boundary singularity."""
    if gamma >= 0.0:
        return math.sqrt(4.0 * gamma + 1.0)
    return 4.0


def gamma_hardy_cone(n: int, k: int) -> float:
    """Hardy constant of ``R^k_+ x R^(n-k)``, i.e. ``((n + 2k - 2)/2)^2``."""
    n = _check_dimension(n)
    if not 0 <= k <= n:
        raise OutOfRange(f"k must lie in [0, n], got {k}")
    return ((n + 2 * k - 2) / 2.0) ** 2


def require_nondegenerate(ex: Exponents) -> None:
    if ex.degenerate or ex.plus == ex.minus:
        raise DegenerateIndicial("beta_+ = beta_-: the log-corrected expansion is not implemented")
