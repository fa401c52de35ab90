"""Discrete radial calculus on logarithmic grids.

Radial functions are stored on nodes ``r_i = exp(t_i)`` with ``t`` uniformly
spaced.  In the variable ``t = log r`` every operator of the problem has
constant coefficients:

* ``r u'(r) = u_t`` and ``r^2 (u'' + (n-1) u'/r) = u_tt + (n-2) u_t``;
* ``int_0^inf f(r) r^(n-1+w) dr = int f e^{(n+w) t} dt``.

Integrals use the trapezoidal rule in ``t`` (spectrally accurate for smooth
integrands decaying at both ends) and derivatives use fourth-order finite
differences in ``t``.  All integrals carry the angular factor
``sphere_area(n)``.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import ProblemParams, critical_exponent, sphere_area
from .errors import (
    NonFinite,
    NonPositive,
    NotAdmissibleWeight,
    OutOfRange,
    TailWarning,
    ZeroDenominator,
)

__all__ = [
    "Boundary",
    "RadialGrid",
    "RadialFunction",
    "WHOLE_SPACE_GRID",
    "d1",
    "d2",
    "quadrature",
    "energy_terms",
    "rayleigh_quotient",
    "el_residual",
    "pohozaev_mismatch",
    "pohozaev_coefficient",
    "weighted_hardy_check",
]

TAIL_RTOL = 1e-10


class Boundary(str, enum.Enum):
    WHOLE_SPACE = "WholeSpace"
    BALL_DIRICHLET = "BallDirichlet"


@dataclass(frozen=True)
class RadialGrid:
    """Geometric grid ``r_i = r_min * rho^i`` on ``[r_min, r_max]``."""

    r_min: float
    r_max: float
    count: int
    _t: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        r_min, r_max, count = float(self.r_min), float(self.r_max), int(self.count)
        if not (math.isfinite(r_min) and math.isfinite(r_max) and 0.0 < r_min < r_max):
            raise OutOfRange(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
        if count < 64:
            raise OutOfRange(f"grid needs at least 64 nodes, got {count}")
        object.__setattr__(self, "r_min", r_min)
        object.__setattr__(self, "r_max", r_max)
        object.__setattr__(self, "count", count)
        t = np.linspace(math.log(r_min), math.log(r_max), count)
        t.flags.writeable = False
        object.__setattr__(self, "_t", t)

    @property
    def t(self) -> np.ndarray:
        return self._t

    @property
    def h(self) -> float:
        return (self._t[-1] - self._t[0]) / (self.count - 1)

    @property
    def ratio(self) -> float:
        return math.exp(self.h)

    @property
    def nodes(self) -> np.ndarray:
        r = np.exp(self._t)
        r[0], r[-1] = self.r_min, self.r_max
        return r

    def refined(self, factor: int = 2) -> "RadialGrid":
        """Same interval with ``factor`` times as many cells."""
        return RadialGrid(self.r_min, self.r_max, factor * (self.count - 1) + 1)

    def as_dict(self) -> dict:
        return {"r_min": self.r_min, "r_max": self.r_max, "count": self.count}


WHOLE_SPACE_GRID = RadialGrid(1e-8, 1e8, 4096)


@dataclass(frozen=True)
class RadialFunction:
    """Values of a radial function on a :class:`RadialGrid`."""

    grid: RadialGrid
    values: np.ndarray
    boundary: Boundary = Boundary.WHOLE_SPACE

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.grid.count,):
            raise OutOfRange(f"expected {self.grid.count} values, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise NonFinite("radial function has non-finite values")
        boundary = Boundary(self.boundary)
        if boundary is Boundary.BALL_DIRICHLET and vals[-1] != 0.0:
            raise OutOfRange("BallDirichlet functions must vanish at r_max")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "boundary", boundary)

    @property
    def r(self) -> np.ndarray:
        return self.grid.nodes

    def with_values(self, values) -> "RadialFunction":
        return RadialFunction(self.grid, values, self.boundary)

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "grid": self.grid.as_dict(),
            "boundary": self.boundary.value,
            "values": [float(v) for v in self.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "RadialFunction":
        g = data["grid"]
        return cls(RadialGrid(g["r_min"], g["r_max"], g["count"]), data["values"], data["boundary"])

    @classmethod
    def from_json(cls, text: str) -> "RadialFunction":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["r", "value"])
        for r, v in zip(self.r, self.values):
            w.writerow([repr(float(r)), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, boundary=Boundary.WHOLE_SPACE) -> "RadialFunction":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [c.strip() for c in rows[0]] != ["r", "value"]:
            raise OutOfRange("CSV must start with header 'r,value'")
        data = np.array([[float(a), float(b)] for a, b in rows[1:]])
        grid = RadialGrid(data[0, 0], data[-1, 0], data.shape[0])
        if not np.allclose(grid.nodes, data[:, 0], rtol=1e-13, atol=0.0):
            raise OutOfRange("CSV radii are not a geometric grid")
        return cls(grid, data[:, 1], boundary)


# finite differences in t ---------------------------------------------------

def d1(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative on a uniform grid (one-sided at the ends)."""
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    out[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / 12.0
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / 12.0
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / 12.0
    out[-1] = -(-25.0 * f[-1] + 48.0 * f[-2] - 36.0 * f[-3] + 16.0 * f[-4] - 3.0 * f[-5]) / 12.0
    out[-2] = -(-3.0 * f[-1] - 10.0 * f[-2] + 18.0 * f[-3] - 6.0 * f[-4] + f[-5]) / 12.0
    return out / h


def d2(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order second derivative on a uniform grid (one-sided at the ends)."""
    f = np.asarray(f, dtype=float)
    out = np.empty_like(f)
    out[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / 12.0
    c0 = np.array([45.0, -154.0, 214.0, -156.0, 61.0, -10.0]) / 12.0
    c1 = np.array([10.0, -15.0, -4.0, 14.0, -6.0, 1.0]) / 12.0
    out[0] = c0 @ f[:6]
    out[1] = c1 @ f[:6]
    out[-1] = c0 @ f[::-1][:6]
    out[-2] = c1 @ f[::-1][:6]
    return out / (h * h)


def _trap(values: np.ndarray, h: float) -> float:
    return h * (values.sum() - 0.5 * (values[0] + values[-1]))


def _radial_integral(values: np.ndarray, grid: RadialGrid, power: float) -> float:
    """``int f(r) r^(power-1) dr`` over the grid, without angular factor."""
    return _trap(values * np.exp(power * grid.t), grid.h)


def _params(params) -> ProblemParams:
    if isinstance(params, ProblemParams):
        return params
    return ProblemParams(*params)


# public operations ---------------------------------------------------------

def quadrature(f: RadialFunction, n: int, weight_power: float = 0.0) -> float:
    """Integral of ``f`` against ``|x|^weight_power dx`` over the grid's shell.

    Computes ``sphere_area(n) * int f(r) r^(n-1+weight_power) dr`` by the
    trapezoidal rule in ``log r``.

    Warns
    -----
    TailWarning
        When a whole-space integrand is still above ``1e-10`` of the sum at
        either end of the grid.
    """
    vals = np.asarray(f.values, dtype=float)
    if not np.all(np.isfinite(vals)):
        raise NonFinite("integrand has non-finite values")
    integrand = vals * np.exp((n + weight_power) * f.grid.t)
    total = _trap(integrand, f.grid.h)
    if f.boundary is Boundary.WHOLE_SPACE:
        tail = max(abs(integrand[0]), abs(integrand[-1]))
        if tail > TAIL_RTOL * abs(total) and total != 0.0:
            warnings.warn(
                f"integrand at the grid ends is {tail / abs(total):.2e} of the total",
                TailWarning,
                stacklevel=2,
            )
    return sphere_area(n) * total


@dataclass(frozen=True)
class EnergyTerms:
    """Radial integrals (with angular factor) entering the quotient."""

    gradient: float
    hardy: float
    mass: float
    constraint: float
    p: float

    def numerator(self, gamma: float, lam: float) -> float:
        return self.gradient - gamma * self.hardy - lam * self.mass


def energy_terms(u: RadialFunction, n: int, s: float, p: float | None = None) -> EnergyTerms:
    """Return ``int|grad u|^2``, ``int u^2/|x|^2``, ``int u^2`` and ``int |u|^p/|x|^s``."""
    if p is None:
        p = critical_exponent(n, s)
    grid = u.grid
    v = np.asarray(u.values)
    ut = d1(v, grid.h)
    w = sphere_area(n)
    return EnergyTerms(
        gradient=w * _radial_integral(ut * ut, grid, n - 2),
        hardy=w * _radial_integral(v * v, grid, n - 2),
        mass=w * _radial_integral(v * v, grid, n),
        constraint=w * _radial_integral(np.abs(v) ** p, grid, n - s),
        p=p,
    )


def rayleigh_quotient(u: RadialFunction, params, lam: float = 0.0, p: float | None = None) -> float:
    """Rayleigh quotient of ``L_gamma - lam`` against the weighted ``L^p`` norm.

    Parameters
    ----------
    u : RadialFunction
        Radial function, whole-space or vanishing at ``r_max``.
    params : ProblemParams or tuple
        ``(n, gamma, s)``; the exponent defaults to the critical one.
    lam : float
        Linear perturbation coefficient.
    p : float, optional
        Subcritical exponent override.
    """
    pp = _params(params)
    e = energy_terms(u, pp.n, pp.s, p)
    if not e.constraint > 0.0:
        raise ZeroDenominator("constraint integral vanishes")
    return e.numerator(pp.gamma, lam) / e.constraint ** (2.0 / e.p)


def el_residual(
    u: RadialFunction, params, lam: float, multiplier: float, p: float | None = None
) -> float:
    """Relative residual of ``-Delta u - gamma u/r^2 - lam u = M u^(p-1)/r^s``.

    The equation is multiplied by ``r^2`` (so each term is a constant
    coefficient stencil in ``log r``) and measured in the norm
    ``(int f^2 r^(n-3) dr)^(1/2)`` over nodes at least two cells from the
    ends.  The result is divided by the largest norm among the individual
    terms, which equals the right-hand side norm whenever it is nonzero.
    """
    pp = _params(params)
    n, gamma, s = pp.n, pp.gamma, pp.s
    if p is None:
        p = critical_exponent(n, s)
    grid = u.grid
    v = np.asarray(u.values)
    inner = slice(2, grid.count - 2)
    if np.any(v[inner] <= 0.0):
        raise NonPositive("el_residual needs u > 0 on interior nodes")
    t = grid.t
    terms = [
        -d2(v, grid.h),
        -(n - 2) * d1(v, grid.h),
        -gamma * v,
        -lam * np.exp(2.0 * t) * v,
        -multiplier * np.exp((2.0 - s) * t) * np.abs(v) ** (p - 1.0),
    ]
    weight = np.exp((n - 2) * t[inner])

    def norm(f):
        return math.sqrt(_trap(f[inner] ** 2 * weight, grid.h))

    scale = max(norm(f) for f in terms)
    if scale == 0.0:
        return 0.0
    return norm(sum(terms)) / scale


def pohozaev_coefficient(n: int, s: float, eps: float = 0.0) -> float:
    """``(n-2)/2 - (n-s)/p`` for ``p = 2*(s) - eps``; zero at ``eps = 0``."""
    p = critical_exponent(n, s) - eps
    return (n - 2) / 2.0 - (n - s) / p


def pohozaev_mismatch(
    u: RadialFunction, params, eps_subcritical: float, lam: float = 0.0
) -> float:
    """Relative mismatch in the Pohozaev identity for a solution on the unit ball.

    ``u`` may be normalized arbitrarily: it is rescaled by the multiplier
    ``M = (numerator)/(constraint)`` so that ``w = M^(1/(p-2)) u`` solves the
    equation with unit coefficient.  The identity checked is::

        c_eps int w^p/|x|^s - lam int w^2 = -(1/2) R w'(R)^2 |S^{n-1}| R^(n-1)

    Returns ``|LHS - RHS| / (|LHS| + |RHS| + tiny)``; zero for ``u = 0``.
    """
    pp = _params(params)
    n, s = pp.n, pp.s
    v = np.asarray(u.values)
    if not np.any(v):
        return 0.0
    p = critical_exponent(n, s) - eps_subcritical
    e = energy_terms(u, n, s, p)
    mult = e.numerator(pp.gamma, lam) / e.constraint
    if abs(p - 2.0) < 1e-14:
        raise OutOfRange("Pohozaev rescaling needs p != 2")
    scale = mult ** (1.0 / (p - 2.0))
    coeff = pohozaev_coefficient(n, s, eps_subcritical)
    lhs = coeff * scale**p * e.constraint - lam * scale**2 * e.mass
    grid = u.grid
    r_end = grid.r_max
    du_end = d1(v, grid.h)[-1] / r_end * scale
    rhs = -0.5 * r_end * du_end**2 * sphere_area(n) * r_end ** (n - 1)
    return abs(lhs - rhs) / (abs(lhs) + abs(rhs) + 1e-300)


def weighted_hardy_check(rho: RadialFunction, u: RadialFunction, n: int) -> float:
    """Margin ``int |grad u|^2 - int (-Delta rho / rho) u^2`` (with angular factor).

    Raises
    ------
    NotAdmissibleWeight
        If ``rho`` or ``-Delta rho`` is not positive on the grid.
    """
    if rho.grid != u.grid:
        raise OutOfRange("rho and u must share a grid")
    grid = rho.grid
    rv = np.asarray(rho.values)
    if np.any(rv <= 0.0):
        raise NotAdmissibleWeight("rho must be positive")
    # r^2 (-Delta rho)
    lap = -(d2(rv, grid.h) + (n - 2) * d1(rv, grid.h))
    if np.any(lap <= 0.0):
        raise NotAdmissibleWeight("-Delta rho must be positive")
    v = np.asarray(u.values)
    vt = d1(v, grid.h)
    w = sphere_area(n)
    grad = _radial_integral(vt * vt, grid, n - 2)
    pot = _radial_integral(lap / rv * v * v, grid, n - 2)
    return w * (grad - pot)
