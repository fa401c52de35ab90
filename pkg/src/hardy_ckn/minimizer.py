"""Constrained radial minimization on the unit ball.

The quotient

    (int |grad u|^2 - gamma int u^2/|x|^2 - lam int u^2) / (int |u|^p |x|^-s)^(2/p)

is discretized with P1 elements in ``t = log r`` on ``[r_min, 1]``: gradient
weights are the exact cell integrals of ``e^{(n-2)t}/h^2`` and the lumped
node weights are exact half-cell integrals of ``e^{alpha t}``, so the
singular weights ``|x|^-2`` and ``|x|^-s`` are integrated in closed form.
``u(1) = 0`` and the inner end is natural.

The minimizer is a Sobolev gradient flow preconditioned by the discrete
operator ``A = K - gamma M_2 - lam M_0`` itself (banded Cholesky), which
turns each step into a damped nonlinear inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded

from .core import beta_exponents, critical_exponent, mu_gamma_s, sphere_area
from .errors import OutOfRange
from .radial import Boundary, RadialFunction, RadialGrid

__all__ = [
    "BallDiscretization",
    "MinimizeResult",
    "ConcentrationReport",
    "PerturbedResult",
    "GapResult",
    "subcritical_minimize",
    "mu_perturbed_ball",
    "concentration_report",
    "extrapolate",
    "gap_test",
    "DEFAULT_EPS_SEQUENCE",
]

DEFAULT_EPS_SEQUENCE = (0.4, 0.2, 0.1, 0.05)
DEFAULT_BALL_GRID = RadialGrid(1e-6, 1.0, 4096)
ENERGY_SLACK = 1e-12


def _cell_integral(alpha: float, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if alpha == 0.0:
        return b - a
    return (np.exp(alpha * b) - np.exp(alpha * a)) / alpha


class BallDiscretization:
    """Discrete energy and constraint on a log grid of the unit ball.

    Parameters
    ----------
    n, gamma, s, lam : problem data.
    grid : RadialGrid
        Must end at ``r_max = 1``.
    """

    def __init__(self, n: int, gamma: float, s: float, lam: float, grid: RadialGrid = DEFAULT_BALL_GRID):
        if grid.r_max != 1.0:
            raise OutOfRange("the ball grid must end at r = 1")
        self.n, self.gamma, self.s, self.lam, self.grid = int(n), float(gamma), float(s), float(lam), grid
        t = grid.t
        h = grid.h
        a, b = t[:-1], t[1:]
        mid = 0.5 * (a + b)
        grad_w = _cell_integral(n - 2.0, a, b) / (h * h)

        def lump(alpha):
            m = np.zeros(t.size)
            m[:-1] += _cell_integral(alpha, a, mid)
            m[1:] += _cell_integral(alpha, mid, b)
            return m[:-1]

        size = t.size - 1  # last node is the Dirichlet node
        diag = grad_w.copy()
        diag[1:] += grad_w[:-1]
        diag -= gamma * lump(n - 2.0) + lam * lump(float(n))
        self.band = np.zeros((2, size))
        self.band[0, 1:] = -grad_w[:-1]
        self.band[1] = diag
        self.constraint_weights = lump(n - s)
        self.angular = sphere_area(n)
        try:
            self.factor = cholesky_banded(self.band, lower=False)
        except np.linalg.LinAlgError:
            raise OutOfRange(
                f"lambda={lam} is not below the first eigenvalue on this grid"
            ) from None

    def apply(self, u: np.ndarray) -> np.ndarray:
        y = self.band[1] * u
        y[:-1] += self.band[0, 1:] * u[1:]
        y[1:] += self.band[0, 1:] * u[:-1]
        return y

    def solve(self, f: np.ndarray) -> np.ndarray:
        return cho_solve_banded((self.factor, False), f)

    def energy(self, u: np.ndarray) -> float:
        """Radial energy (no angular factor) of interior values ``u``."""
        return float(u @ self.apply(u))

    def constraint(self, u: np.ndarray, p: float) -> float:
        return float(self.constraint_weights @ np.abs(u) ** p)

    def quotient(self, u, p: float) -> float:
        """Full-space quotient (angular factor included) of ``u``.

        ``u`` may hold all grid values (the last one is ignored) or only the
        interior ones.
        """
        u = np.asarray(u, dtype=float)
        if u.size == self.grid.count:
            u = u[:-1]
        return self.energy(u) / self.constraint(u, p) ** (2.0 / p) * self.angular ** (1.0 - 2.0 / p)


@dataclass(frozen=True)
class MinimizeResult:
    """Outcome of :func:`subcritical_minimize`.

    ``u`` is normalized so that ``int u^p / |x|^s dx = 1``; then ``mu`` is
    its discrete energy.
    """

    mu: float
    u: RadialFunction
    iterations: int
    converged: bool
    gradient_norm: float
    p: float
    eps: float
    energy_history: np.ndarray = field(repr=False)
    positive: bool = True


def _initial_profile(n, gamma, s, r):
    ex = beta_exponents(n, gamma)
    k = 2.0 - s
    x = r / 0.1
    lx = np.log(x)
    prof = np.exp(-(n - 2) / k * np.logaddexp(k * ex.minus / (n - 2) * lx, k * ex.plus / (n - 2) * lx))
    return prof * (1.0 - r * r)


def subcritical_minimize(
    n: int,
    gamma: float,
    s: float,
    lam: float,
    eps: float,
    grid: RadialGrid = DEFAULT_BALL_GRID,
    init: Optional[np.ndarray] = None,
    max_iter: int = 50_000,
    tol: float = 1e-8,
) -> MinimizeResult:
    """Minimize the subcritical quotient with exponent ``p = 2*(s) - eps``.

    Parameters
    ----------
    n, gamma, s, lam : problem data; ``lam`` must be below the first eigenvalue.
    eps : float
        Subcriticality, ``0 < eps < 2*(s) - 2``.
    grid : RadialGrid
        Log grid on ``[r_min, 1]``.
    init : array, optional
        Starting values on the grid; defaults to a cut-off extremal with
        concentration scale 0.1.
    max_iter, tol : stopping rule on the preconditioned gradient norm.

    Returns
    -------
    MinimizeResult
        Non-convergence is reported through ``converged``, not raised.
    """
    if not 0.0 <= s < 2.0:
        raise OutOfRange(f"s must lie in [0, 2), got {s}")
    if not gamma < (n - 2) ** 2 / 4.0:
        raise OutOfRange("gamma must be below (n-2)^2/4")
    pc = critical_exponent(n, s)
    if not 0.0 < eps < pc - 2.0:
        raise OutOfRange(f"eps must lie in (0, {pc - 2.0}), got {eps}")
    p = pc - eps
    disc = BallDiscretization(n, gamma, s, lam, grid)
    r = grid.nodes[:-1]
    u = _initial_profile(n, gamma, s, r) if init is None else np.abs(np.asarray(init, dtype=float))
    if u.size == grid.count:
        u = u[:-1]
    if not np.any(u > 0.0):
        raise OutOfRange("initial iterate must be nonzero")
    c = disc.constraint_weights
    u = u / disc.constraint(u, p) ** (1.0 / p)
    q = disc.energy(u)
    history = [q]
    tau = 1.0
    it = 0
    gnorm = math.inf
    converged = False
    while it < max_iter:
        z = disc.solve(c * u ** (p - 1.0))
        d = u - q * z
        gnorm = math.sqrt(max(disc.energy(d), 0.0) / q)
        if gnorm < tol:
            converged = True
            break
        while True:
            v = np.abs(u - tau * d)
            v /= disc.constraint(v, p) ** (1.0 / p)
            qv = disc.energy(v)
            if qv <= q * (1.0 + ENERGY_SLACK):
                break
            tau *= 0.5
            if tau < 1e-12:
                break
        if tau < 1e-12:
            break
        u, q = v, qv
        history.append(q)
        tau = min(2.0 * tau, 1.0)
        it += 1
    w = disc.angular
    full = np.append(u, 0.0) * w ** (-1.0 / p)
    mu = q * w ** (1.0 - 2.0 / p)
    hist = np.asarray(history) * w ** (1.0 - 2.0 / p)
    return MinimizeResult(
        mu=mu,
        u=RadialFunction(grid, full, Boundary.BALL_DIRICHLET),
        iterations=it,
        converged=converged,
        gradient_norm=gnorm,
        p=p,
        eps=float(eps),
        energy_history=hist,
        positive=bool(np.all(u > 0.0)),
    )


@dataclass(frozen=True)
class ConcentrationReport:
    peak_radius: float
    scale: float
    mass_in_core: float


def _crossing(r, w, level, i0, step):
    """Log-interpolated radius where ``w`` drops below ``level`` walking from ``i0``."""
    i = i0
    while 0 <= i + step < r.size and w[i + step] >= level:
        i += step
    j = i + step
    if not 0 <= j < r.size:
        return float(r[i])
    a, b = w[i], w[j]
    frac = (a - level) / (a - b) if a != b else 0.0
    return float(math.exp(math.log(r[i]) + frac * (math.log(r[j]) - math.log(r[i]))))


def concentration_report(
    u: RadialFunction,
    s: float,
    n: Optional[int] = None,
    p: Optional[float] = None,
    beta_minus: float = 0.0,
) -> ConcentrationReport:
    """Peak, half-max width and core fraction of a nonnegative radial function.

    Parameters
    ----------
    u : RadialFunction
    s : float
        Weight exponent of the constraint ``int u^p |x|^-s``.
    n : int, optional
        Dimension for the constraint measure (default 3).
    p : float, optional
        Constraint exponent (default critical).
    beta_minus : float
        Profiles singular like ``r^-beta_minus`` at the origin are measured
        through ``u r^beta_minus``, which stays bounded.
    """
    n = 3 if n is None else int(n)
    if p is None:
        p = critical_exponent(n, s)
    r = u.grid.nodes
    vals = np.asarray(u.values)
    if np.any(vals < 0.0) or not np.any(vals > 0.0):
        raise OutOfRange("concentration_report needs u >= 0, not identically zero")
    w = vals * r**beta_minus
    ip = int(np.argmax(w))
    half = 0.5 * w[ip]
    right = _crossing(r, w, half, ip, 1)
    left = _crossing(r, w, half, ip, -1)
    if left <= r[0]:
        left = 0.0
    scale = max(right - left, 0.0)
    if scale == 0.0:
        scale = float(r[-1] - r[0])
    integrand = np.abs(vals) ** p * np.exp((n - s) * u.grid.t)
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]))])
    total = cum[-1]
    core = float(np.interp(math.log(min(10.0 * scale, r[-1])), u.grid.t, cum)) if total > 0 else 0.0
    frac = min(max(core / total, 0.0), 1.0) if total > 0 else 0.0
    return ConcentrationReport(float(r[ip]), float(scale), frac)


def extrapolate(eps: Sequence[float], mus: Sequence[float]) -> tuple[float, float, np.ndarray]:
    """Fit ``mu(eps) = mu0 + c1 eps log(1/eps) + c2 eps`` by least squares.

    Returns ``(mu0, error_estimate, coefficients)``; the error estimate is the
    change in ``mu0`` when the largest ``eps`` is dropped (with the two-term
    model ``mu0 + c eps`` when only three points are available).
    """
    e = np.asarray(eps, dtype=float)
    m = np.asarray(mus, dtype=float)
    if e.size < 3:
        raise OutOfRange("extrapolation needs at least three values of eps")

    def fit(ee, mm, terms):
        cols = [np.ones_like(ee), ee * np.log(1.0 / ee), ee][:terms]
        coef, *_ = np.linalg.lstsq(np.column_stack(cols), mm, rcond=None)
        return coef

    coef = fit(e, m, 3)
    order = np.argsort(e)
    if e.size >= 4:
        keep = order[:-1]
        alt = fit(e[keep], m[keep], 3)[0]
    else:
        alt = fit(e[order[:2]], m[order[:2]], 2)[0]
    return float(coef[0]), float(abs(coef[0] - alt)), coef


@dataclass(frozen=True)
class PerturbedResult:
    estimate: float
    eps_sequence: tuple
    mus: tuple
    extrapolated: float
    extrapolation_error: float
    reports: tuple
    converged: tuple
    upper_bound_only: bool
    grid: RadialGrid


def mu_perturbed_ball(
    n: int,
    gamma: float,
    s: float,
    lam: float,
    eps_sequence: Sequence[float] = DEFAULT_EPS_SEQUENCE,
    grid: RadialGrid = DEFAULT_BALL_GRID,
) -> PerturbedResult:
    """Subcritical minima along ``eps_sequence`` and their extrapolation to ``eps = 0``.

    For ``gamma < 0`` only radial competitors are explored, so the values are
    upper bounds (flagged by ``upper_bound_only``).
    """
    mus, reports, conv = [], [], []
    bm = beta_exponents(n, gamma).minus
    u0 = None
    for eps in sorted(eps_sequence, reverse=True):
        res = subcritical_minimize(n, gamma, s, lam, eps, grid, init=u0)
        u0 = res.u.values
        mus.append(res.mu)
        conv.append(res.converged)
        reports.append(concentration_report(res.u, s, n, res.p, beta_minus=max(bm, 0.0)))
    eps_sorted = tuple(sorted(eps_sequence, reverse=True))
    mu0, err, _ = extrapolate(eps_sorted, mus)
    return PerturbedResult(
        estimate=mus[-1],
        eps_sequence=eps_sorted,
        mus=tuple(mus),
        extrapolated=mu0,
        extrapolation_error=err,
        reports=tuple(reports),
        converged=tuple(conv),
        upper_bound_only=gamma < 0.0,
        grid=grid,
    )


@dataclass(frozen=True)
class GapResult:
    gap: float
    compact: bool
    mu_whole_space: float
    perturbed: PerturbedResult


def gap_test(
    n: int,
    gamma: float,
    s: float,
    lam: float,
    eps_sequence: Sequence[float] = DEFAULT_EPS_SEQUENCE,
    grid: RadialGrid = DEFAULT_BALL_GRID,
) -> GapResult:
    """Compare the extrapolated ball constant with the whole-space constant.

    ``compact`` is true when the gap exceeds three times the extrapolation
    error estimate.
    """
    whole = mu_gamma_s(n, gamma, s)
    pert = mu_perturbed_ball(n, gamma, s, lam, eps_sequence, grid)
    gap = whole - pert.extrapolated
    return GapResult(gap, bool(gap > 3.0 * pert.extrapolation_error and gap > 0.0), whole, pert)
