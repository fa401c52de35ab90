"""Singular Sturm-Liouville machinery on the unit ball.

Every radial equation is rewritten in ``t = log r``.  For
``u'' + (n-1) u'/r + gamma u/r^2 - a u = 0`` the substitution
``u = r^-beta v`` with ``beta`` an indicial root gives::

    v_tt + (n - 2 - 2 beta) v_t - a e^{2t} v = 0,

whose coefficients are smooth and bounded as ``t -> -inf``.  The regular
solution is the entire power series ``v = sum_k c_k r^{2k}``, used to start
the integration at ``start_radius``.

The interior mass uses the reduction-of-order representation of the
singular solution ``H`` vanishing on the unit sphere::

    H(r) = gap * u_-(r) * int_r^1 s^(1-n) u_-(s)^-2 ds,

where ``u_- = r^-beta_- v`` is the regular solution.  Expanding at ``0``
gives ``H = r^-beta_+ (1 + ...) + m r^-beta_- (1 + ...)`` with
``m = gap * int_0^1 s^(-1-gap) (v^-2 - 1) ds - 1``.  ``m`` is also recovered
from a windowed least-squares fit of ``H r^beta_+`` near the origin; both
values are reported.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import _kernels
from .core import beta_exponents, require_nondegenerate
from .errors import (
    BracketFailure,
    DegenerateIndicial,
    FitUnstable,
    IntegrationFailure,
    OutOfRange,
)
from .radial import Boundary, RadialFunction, RadialGrid

__all__ = [
    "Branch",
    "ShootingConfig",
    "Potential",
    "parse_potential",
    "HIResult",
    "Trajectory",
    "MassResult",
    "SpectralResult",
    "first_zero",
    "hi_potential_test",
    "shoot_from_origin",
    "interior_mass_ball",
    "lambda_1_ball",
    "lambda_star_ball",
    "mass_zero_crossing",
]

FIT_RESIDUAL_MAX = 1e-4


class Branch(str, enum.Enum):
    MINUS = "Minus"
    PLUS = "Plus"


@dataclass(frozen=True)
class ShootingConfig:
    """Integration settings shared by all shooting solvers."""

    start_radius: float = 1e-6
    integrator_tolerance: float = 1e-11
    max_step: float = 0.25
    grid_count: int = 4096

    def __post_init__(self):
        if not 0.0 < self.start_radius <= 1e-4:
            raise OutOfRange(f"start_radius must lie in (0, 1e-4], got {self.start_radius}")
        if not 1e-14 <= self.integrator_tolerance <= 1e-6:
            raise OutOfRange("integrator_tolerance must lie in [1e-14, 1e-6]")
        if not self.max_step > 0.0:
            raise OutOfRange("max_step must be positive")

    @property
    def atol(self) -> float:
        return self.integrator_tolerance * 1e-3

    def as_dict(self) -> dict:
        return {
            "start_radius": self.start_radius,
            "integrator_tolerance": self.integrator_tolerance,
            "max_step": self.max_step,
            "grid_count": self.grid_count,
            "backend": _kernels.BACKEND,
        }


DEFAULT_CONFIG = ShootingConfig()


def _integrate(c, kappa, lam, k, t0, y0, dy0, t_out, config, **kw):
    out = _kernels.integrate_linear(
        float(c), float(kappa), float(lam), float(k), float(t0), float(y0), float(dy0),
        np.asarray(t_out, dtype=float), config.integrator_tolerance, config.atol,
        config.max_step, **kw,
    )
    status = out[6]
    if status != 0:
        raise IntegrationFailure(_kernels.STATUS_MESSAGES.get(status, f"status {status}"))
    return out


def _regular_series(c: float, a: float, r: float) -> tuple[float, float]:
    """Value and t-derivative of the regular solution ``1 + sum c_k r^2k``.

    Solves ``v_tt + c v_t - a e^{2t} v = 0`` with ``c_k = a c_{k-1}/(2k(2k+c))``.
    """
    v, vt, term = 1.0, 0.0, 1.0
    x = r * r
    for kk in range(1, 200):
        den = 2 * kk * (2 * kk + c)
        if den == 0.0:
            raise DegenerateIndicial("resonant indicial roots: the regular series needs a log term")
        term *= a * x / den
        v += term
        vt += 2 * kk * term
        if abs(term) * 2 * kk <= 1e-17 * abs(v):
            break
    return v, vt


# HI potentials -------------------------------------------------------------

@dataclass(frozen=True)
class Potential:
    """Radial potential ``P(r)``.

    ``power`` holds ``(c, a)`` when ``P = c r^-a``; such potentials run on the
    compiled kernel.  Others are integrated with scipy's DOP853.
    """

    name: str
    func: Callable[[float], float] = field(compare=False)
    power: Optional[tuple[float, float]] = None
    domain: float = math.inf

    def __call__(self, r):
        return self.func(r)

    @classmethod
    def constant(cls, c: float) -> "Potential":
        c = float(c)
        if c < 0.0:
            raise OutOfRange("potential must be nonnegative")
        return cls(f"const:{c!r}", lambda r: c + 0.0 * np.asarray(r, dtype=float), (c, 0.0))

    @classmethod
    def power_law(cls, c: float, a: float) -> "Potential":
        c, a = float(c), float(a)
        if c < 0.0:
            raise OutOfRange("potential must be nonnegative")
        return cls(f"power:{c!r},{a!r}", lambda r: c * np.asarray(r, dtype=float) ** (-a), (c, a))

    @classmethod
    def log_squared(cls, rho: float) -> "Potential":
        """``1 / (4 r^2 log(rho/r)^2)``, an HI potential on ``(0, rho/e)``."""
        rho = float(rho)
        if not rho > 0.0:
            raise OutOfRange("rho must be positive")

        def f(r):
            r = np.asarray(r, dtype=float)
            return 1.0 / (4.0 * r * r * np.log(rho / r) ** 2)

        return cls(f"logsq:{rho!r}", f, None, rho / math.e)

    @classmethod
    def iterated_log(cls, k: int, rho: float) -> "Potential":
        """``(1/(4 r^2)) sum_{j<=k} prod_{i<=j} (log^(i)(rho/r))^-2``.

        Defined on ``(0, rho / e^e^...^e)`` with ``k`` exponentials; ``k = 1``
        coincides with :meth:`log_squared`.
        """
        k, rho = int(k), float(rho)
        if k < 1 or not rho > 0.0:
            raise OutOfRange("iterlog needs k >= 1 and rho > 0")
        tower = 1.0
        for _ in range(k):
            tower = math.exp(tower)
        if not math.isfinite(tower):
            raise OutOfRange(f"k={k} is too large to represent the domain")

        def f(r):
            r = np.asarray(r, dtype=float)
            total = np.zeros_like(r)
            prod = np.ones_like(r)
            lg = rho / r
            for _ in range(k):
                lg = np.log(lg)
                prod = prod * lg
                total = total + prod ** -2.0
            return total / (4.0 * r * r)

        return cls(f"iterlog:{k},{rho!r}", f, None, rho / tower)


def parse_potential(expr: str) -> Potential:
    """Parse ``const:c``, ``power:c,a``, ``logsq:rho`` or ``iterlog:k,rho``."""
    kind, _, rest = expr.partition(":")
    args = [a for a in rest.split(",") if a.strip()]
    try:
        if kind == "const" and len(args) == 1:
            return Potential.constant(float(args[0]))
        if kind == "power" and len(args) == 2:
            return Potential.power_law(float(args[0]), float(args[1]))
        if kind == "logsq" and len(args) == 1:
            return Potential.log_squared(float(args[0]))
        if kind == "iterlog" and len(args) == 2:
            return Potential.iterated_log(int(args[0]), float(args[1]))
    except ValueError as exc:
        raise OutOfRange(f"bad potential expression {expr!r}: {exc}") from None
    raise OutOfRange(
        f"bad potential expression {expr!r}; expected const:c, power:c,a, logsq:rho or iterlog:k,rho"
    )


@dataclass(frozen=True)
class HIResult:
    is_hi: bool
    first_zero: Optional[float]


def first_zero(P, r_max: float, config: ShootingConfig = DEFAULT_CONFIG) -> Optional[float]:
    """Smallest zero in ``(0, r_max]`` of the solution of ``y'' + y'/r + P y = 0``.

    The solution is normalized by ``y -> 1``, ``y' -> 0`` at the origin.  In
    ``t = log r`` the equation reads ``y_tt + r^2 P y = 0``.

    Parameters
    ----------
    P : Potential or callable
        Nonnegative potential.
    r_max : float
        Right end of the search interval.

    Returns
    -------
    float or None
        Location of the first zero, located to near machine precision.

    Raises
    ------
    OutOfRange
        If ``r_max`` exceeds the domain on which ``P`` is defined.
    """
    domain = getattr(P, "domain", math.inf)
    if r_max > domain:
        raise OutOfRange(f"interval (0, {r_max}) exceeds the potential's domain (0, {domain})")
    r0 = config.start_radius
    if not r_max > r0:
        return None
    t0, t1 = math.log(r0), math.log(r_max)
    power = getattr(P, "power", None)
    if power is not None:
        c, a = power
        m = 2.0 - a
        if c == 0.0:
            return None
        if m > 0.0:
            # y = 1 - c r^m / m^2 + ...
            y0 = 1.0 - c * r0**m / (m * m)
            dy0 = -c * r0**m / m
        else:
            y0, dy0 = 1.0, 0.0
        out = _integrate(0.0, 0.0, c, m, t0, y0, dy0, [t1], config, stop_at_zero=True)
        tz = out[4]
        return None if math.isnan(tz) else math.exp(tz)

    q0 = r0 * r0 * float(P(r0))
    if not math.isfinite(q0) or q0 < 0.0:
        raise IntegrationFailure(f"potential is not finite and nonnegative at r={r0}")
    y0, dy0 = (1.0 - q0 / 4.0, -q0 / 2.0) if q0 <= 1e-3 else (1.0, 0.0)

    def rhs(t, y):
        r = math.exp(t)
        return [y[1], -r * r * float(P(r)) * y[0]]

    def event(t, y):
        return y[0]

    event.terminal = True
    event.direction = -1
    sol = solve_ivp(
        rhs, (t0, t1), [y0, dy0], method="DOP853",
        rtol=config.integrator_tolerance, atol=config.atol,
        max_step=config.max_step, events=event,
    )
    if sol.status == -1:
        raise IntegrationFailure(sol.message)
    if sol.t_events[0].size:
        return math.exp(float(sol.t_events[0][0]))
    return None


def hi_potential_test(P, R: float, config: ShootingConfig = DEFAULT_CONFIG) -> HIResult:
    """``P`` is an HI potential on ``(0, R)`` iff the shooting solution stays positive."""
    z = first_zero(P, R, config)
    return HIResult(z is None, z)


# shooting from the singular point ------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """Solution of the radial equation sampled on a log grid."""

    n: int
    gamma: float
    branch: Branch
    beta: float
    r: np.ndarray
    u: np.ndarray
    du: np.ndarray

    def as_function(self, boundary=Boundary.WHOLE_SPACE) -> RadialFunction:
        grid = RadialGrid(float(self.r[0]), float(self.r[-1]), self.r.size)
        return RadialFunction(grid, self.u, boundary)


def _branch_beta(n, gamma, branch):
    ex = beta_exponents(n, gamma)
    require_nondegenerate(ex)
    beta = ex.minus if Branch(branch) is Branch.MINUS else ex.plus
    return ex, beta


def shoot_from_origin(
    n: int,
    gamma: float,
    a,
    exponent_branch=Branch.MINUS,
    config: ShootingConfig = DEFAULT_CONFIG,
) -> Trajectory:
    """Solve ``u'' + (n-1)u'/r + gamma u/r^2 - a(r) u = 0`` with ``u ~ r^-beta`` at 0.

    Parameters
    ----------
    a : float or callable
        Constant or radial potential.
    exponent_branch : Branch
        Which indicial root ``beta`` fixes the behaviour at the origin.
    """
    ex, beta = _branch_beta(n, gamma, exponent_branch)
    c = n - 2 - 2.0 * beta
    grid = RadialGrid(config.start_radius, 1.0, config.grid_count)
    t = grid.t
    r = grid.nodes
    if callable(a):
        a0 = float(a(config.start_radius))
        v0, vt0 = _regular_series(c, a0, config.start_radius)

        def rhs(tt, y):
            rr = math.exp(tt)
            return [y[1], -c * y[1] + float(a(rr)) * rr * rr * y[0]]

        sol = solve_ivp(
            rhs, (t[0], t[-1]), [v0, vt0], method="DOP853", t_eval=t,
            rtol=config.integrator_tolerance, atol=config.atol, max_step=config.max_step,
        )
        if not sol.success:
            raise IntegrationFailure(sol.message)
        v, vt = sol.y
    else:
        a = float(a)
        v0, vt0 = _regular_series(c, a, config.start_radius)
        v, vt = _integrate(c, 0.0, -a, 2.0, t[0], v0, vt0, t, config)[:2]
    scale = np.exp(-beta * t)
    u = scale * v
    du = scale * (vt - beta * v) / r
    return Trajectory(int(n), float(gamma), Branch(exponent_branch), beta, r, u, du)


# interior mass -------------------------------------------------------------

@dataclass(frozen=True)
class MassResult:
    """Coefficients of ``H = c1 r^-beta_+ + c2 r^-beta_- + ...`` and ``m = c2/c1``."""

    c1: float
    c2: float
    mass: float
    fit_residual: float
    window: tuple[float, float]
    mass_integral: float
    n: int
    gamma: float
    lam: float
    radius: float = 1.0


def _upper_range(n, gamma):
    lo, hi = (n - 2) ** 2 / 4.0 - 1.0, (n - 2) ** 2 / 4.0
    if not lo < gamma < hi:
        raise OutOfRange(f"gamma={gamma} must lie in ({lo}, {hi}) for the mass expansion")


def interior_mass_ball(
    n: int,
    gamma: float,
    lam: float,
    config: ShootingConfig = DEFAULT_CONFIG,
    radius: float = 1.0,
    window_points: int = 64,
) -> MassResult:
    """Hardy-singular interior mass of the ball for ``L_gamma - lam``.

    Parameters
    ----------
    n, gamma : int, float
        Dimension and Hardy coefficient with
        ``(n-2)^2/4 - 1 < gamma < (n-2)^2/4``.
    lam : float
        Nonnegative, below the first eigenvalue.
    radius : float
        Ball radius; reduces to the unit ball at ``lam * radius^2``.

    Raises
    ------
    OutOfRange
        Outside the parameter range, or when ``lam >= lambda_1``.
    FitUnstable
        If the windowed fit residual exceeds ``1e-4``.
    """
    _upper_range(n, gamma)
    if not lam >= 0.0:
        raise OutOfRange(f"lambda must be nonnegative, got {lam}")
    if not radius > 0.0:
        raise OutOfRange("radius must be positive")
    ex = beta_exponents(n, gamma)
    gap = ex.gap
    lam_unit = lam * radius * radius
    r0 = config.start_radius
    t0 = math.log(r0)
    t_win = np.linspace(t0, t0 + math.log(100.0), window_points)
    t_out = np.concatenate([t_win, [0.0]])
    v0, vt0 = _regular_series(gap, -lam_unit, r0)
    # tail of int_{-inf}^{t0} e^{-gap t}(v^-2 - 1) dt from the series
    k1 = -lam_unit / (2.0 * (2.0 + gap))
    tail = -2.0 * k1 * r0 ** (2.0 - gap) / (2.0 - gap) + 3.0 * k1 * k1 * r0 ** (4.0 - gap) / (4.0 - gap)
    v, _, q, zeros, _, _, _ = _integrate(
        gap, 0.0, lam_unit, 2.0, t0, v0, vt0, t_out, config, quad=True, g=gap, q0=tail
    )
    if zeros or not v[-1] > 0.0:
        raise OutOfRange(f"lambda={lam} is not below the first eigenvalue of the ball")
    total = q[-1]
    m_int = gap * total - 1.0

    vw, qw = v[:-1], q[:-1]
    rw = np.exp(t_win)
    rg = rw**gap
    data = vw * (1.0 - rg + gap * rg * (total - qw))
    kp = -lam_unit / (2.0 * (2.0 - gap))
    basis = np.column_stack([1.0 + kp * rw * rw, rg * (1.0 + k1 * rw * rw)])
    norms = np.linalg.norm(basis, axis=0)
    coef, *_ = np.linalg.lstsq(basis / norms, data, rcond=None)
    coef = coef / norms
    resid = data - basis @ coef
    fit_residual = float(np.linalg.norm(resid) / np.linalg.norm(data))
    if fit_residual > FIT_RESIDUAL_MAX:
        raise FitUnstable(f"fit residual {fit_residual:.3e} exceeds {FIT_RESIDUAL_MAX}")
    c1, c2 = float(coef[0]), float(coef[1])
    # undo the unit-ball reduction: m_R = R^-gap m_1(lam R^2)
    rs = radius ** (-gap)
    c1r = c1 * radius ** ex.plus
    c2r = c2 * radius ** ex.minus
    return MassResult(
        c1=c1r,
        c2=c2r,
        mass=c2r / c1r,
        fit_residual=fit_residual,
        window=(float(rw[0] * radius), float(rw[-1] * radius)),
        mass_integral=m_int * rs,
        n=int(n),
        gamma=float(gamma),
        lam=float(lam),
        radius=float(radius),
    )


# eigenvalues ---------------------------------------------------------------

@dataclass(frozen=True)
class SpectralResult:
    eigenvalue: float
    eigenfunction: RadialFunction
    sturm_index: int
    bracket: tuple[float, float]
    bracket_zero_counts: tuple[int, int]


def _shoot_end(c, lam, config, r0=None):
    r0 = config.start_radius if r0 is None else r0
    t0 = math.log(r0)
    v0, vt0 = _regular_series(c, -lam, r0)
    out = _integrate(c, 0.0, lam, 2.0, t0, v0, vt0, [0.0], config)
    return float(out[0][0]), int(out[3])


def _first_eigenvalue(c, config, r0=None):
    """Smallest ``lam`` with ``v(1) = 0`` for ``v_tt + c v_t + lam e^{2t} v = 0``."""
    lo, hi = 0.0, 4.0
    v_lo, z_lo = _shoot_end(c, lo, config, r0)
    if z_lo or v_lo <= 0.0:
        raise BracketFailure("shooting solution already vanishes at lambda = 0")
    for _ in range(60):
        v_hi, z_hi = _shoot_end(c, hi, config, r0)
        if z_hi >= 1:
            break
        lo = hi
        hi *= 2.0
    else:
        raise BracketFailure("no sign change found while expanding the bracket")
    # shrink until exactly one zero lies in (r0, 1]
    for _ in range(200):
        if z_hi == 1 and v_hi < 0.0:
            break
        mid = 0.5 * (lo + hi)
        v_mid, z_mid = _shoot_end(c, mid, config, r0)
        if z_mid == 0 and v_mid > 0.0:
            lo = mid
        else:
            hi, v_hi, z_hi = mid, v_mid, z_mid
    else:
        raise BracketFailure("could not isolate the first eigenvalue")
    z_lo = _shoot_end(c, lo, config, r0)[1]
    lam = brentq(lambda x: _shoot_end(c, x, config, r0)[0], lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    return lam, (lo, hi), (z_lo, z_hi)


def _eigenfunction(c, beta, lam, config, r0=None):
    r0 = config.start_radius if r0 is None else r0
    grid = RadialGrid(r0, 1.0, config.grid_count)
    v0, vt0 = _regular_series(c, -lam, r0)
    v = _integrate(c, 0.0, lam, 2.0, grid.t[0], v0, vt0, grid.t, config)[0]
    u = np.exp(-beta * grid.t) * v
    u[-1] = 0.0
    u = u / np.max(np.abs(u))
    inner = u[:-1]
    sturm = int(np.count_nonzero(np.signbit(inner[1:]) != np.signbit(inner[:-1])))
    return RadialFunction(grid, u, Boundary.BALL_DIRICHLET), sturm


def lambda_1_ball(n: int, gamma: float, config: ShootingConfig = DEFAULT_CONFIG) -> SpectralResult:
    """First Dirichlet eigenvalue of ``L_gamma`` on the unit ball (radial shooting).

    The bracket is certified by Sturm zero counts (no zero below, one above)
    and refined with Brent's method on the boundary value.
    """
    ex, beta = _branch_beta(n, gamma, Branch.MINUS)
    c = ex.gap
    lam, bracket, counts = _first_eigenvalue(c, config)
    ef, sturm = _eigenfunction(c, beta, lam, config)
    return SpectralResult(lam, ef, sturm, bracket, counts)


LAMBDA_STAR_START = 1e-2


def lambda_star_ball(n: int, gamma: float, config: ShootingConfig = DEFAULT_CONFIG) -> SpectralResult:
    """First eigenvalue of ``-(r^m u')' = lam r^m u`` on (0,1), ``m = n-1-2 beta_+``.

    In ``t = log r`` this is the regular-solution problem with drift
    ``c = -gap``.  Forward integration amplifies errors like ``r^-gap``, so
    the power series (exact to rounding) carries the solution up to
    ``r = 1e-2`` before the integrator takes over.
    """
    _upper_range(n, gamma)
    ex = beta_exponents(n, gamma)
    c = -ex.gap
    lam, bracket, counts = _first_eigenvalue(c, config, LAMBDA_STAR_START)
    ef, sturm = _eigenfunction(c, 0.0, lam, config, LAMBDA_STAR_START)
    return SpectralResult(lam, ef, sturm, bracket, counts)


def lambda_star_weight_exponent(n: int, gamma: float) -> float:
    """Exponent ``m = n - 1 - 2 beta_+`` of the weight ``r^m`` defining lambda*."""
    return n - 1 - 2.0 * beta_exponents(n, gamma).plus


def mass_zero_crossing(
    n: int,
    gamma: float,
    config: ShootingConfig = DEFAULT_CONFIG,
    lambda_1: Optional[float] = None,
) -> Optional[float]:
    """Value ``lam_0`` in ``(0, lambda_1)`` where the interior mass changes sign.

    Returns None if the mass stays negative up to ``lambda_1 (1 - 2^-40)``.
    """
    _upper_range(n, gamma)
    if lambda_1 is None:
        lambda_1 = lambda_1_ball(n, gamma, config).eigenvalue

    def mass(lam):
        return interior_mass_ball(n, gamma, lam, config).mass

    if not mass(0.0) < 0.0:
        raise BracketFailure("mass at lambda = 0 is not negative")
    lo, hi = 0.0, None
    for kk in range(1, 41):
        cand = lambda_1 * (1.0 - 2.0**-kk)
        try:
            m = mass(cand)
        except OutOfRange:
            break
        if m > 0.0:
            hi = cand
            break
        lo = cand
    if hi is None:
        return None
    return brentq(mass, lo, hi, xtol=1e-14 * lambda_1, rtol=1e-15, maxiter=200)
