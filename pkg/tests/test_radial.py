import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_ckn.core import ProblemParams, best_constant, extremal_interior, extremal_multiplier
from hardy_ckn.errors import NonFinite, NonPositive, NotAdmissibleWeight, OutOfRange, TailWarning
from hardy_ckn.radial import (
    WHOLE_SPACE_GRID,
    Boundary,
    RadialFunction,
    RadialGrid,
    d1,
    d2,
    el_residual,
    energy_terms,
    pohozaev_coefficient,
    pohozaev_mismatch,
    quadrature,
    rayleigh_quotient,
    weighted_hardy_check,
)


def test_grid_basics():
    g = RadialGrid(1e-3, 10.0, 101)
    assert g.nodes[0] == 1e-3 and g.nodes[-1] == 10.0
    assert g.ratio == pytest.approx((1e4) ** (1 / 100))
    assert g.refined().count == 201
    with pytest.raises(OutOfRange):
        RadialGrid(1.0, 0.5, 100)
    with pytest.raises(OutOfRange):
        RadialGrid(1e-3, 1.0, 10)


def test_radial_function_is_immutable_and_validated():
    g = RadialGrid(1e-3, 1.0, 64)
    u = RadialFunction(g, np.linspace(1, 0, 64), Boundary.BALL_DIRICHLET)
    with pytest.raises(ValueError):
        u.values[0] = 3.0
    with pytest.raises(OutOfRange):
        RadialFunction(g, np.ones(64), Boundary.BALL_DIRICHLET)
    with pytest.raises(NonFinite):
        RadialFunction(g, np.full(64, np.nan))
    with pytest.raises(OutOfRange):
        RadialFunction(g, np.ones(63))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e300, 1e300, allow_nan=False), min_size=64, max_size=64))
def test_serialization_round_trip_is_exact(vals):
    g = RadialGrid(1e-4, 3.0, 64)
    u = RadialFunction(g, vals)
    assert np.array_equal(RadialFunction.from_json(u.to_json()).values, u.values)
    back = RadialFunction.from_csv(u.to_csv())
    assert np.array_equal(back.values, u.values)
    assert back.grid == g
    assert "\r\n" in u.to_csv()


@pytest.mark.parametrize("count", [257, 513])
def test_fd_fourth_order(count):
    g = RadialGrid(0.1, 10.0, count)
    t = g.t
    f = np.sin(t) * np.exp(0.3 * t)
    df = (np.cos(t) + 0.3 * np.sin(t)) * np.exp(0.3 * t)
    d2f = (-np.sin(t) + 0.6 * np.cos(t) + 0.09 * np.sin(t)) * np.exp(0.3 * t)
    e1 = np.max(np.abs(d1(f, g.h) - df))
    e2 = np.max(np.abs(d2(f, g.h) - d2f))
    g2 = g.refined()
    f2 = np.sin(g2.t) * np.exp(0.3 * g2.t)
    df2 = (np.cos(g2.t) + 0.3 * np.sin(g2.t)) * np.exp(0.3 * g2.t)
    e1b = np.max(np.abs(d1(f2, g2.h) - df2))
    assert e1 < 1e-6 and e2 < 1e-5
    assert math.log2(e1 / e1b) > 3.5


def test_quadrature_of_gaussian():
    g = RadialGrid(1e-6, 20.0, 4096)
    u = RadialFunction(g, np.exp(-g.nodes**2))
    # int_{R^3} e^{-|x|^2} dx = pi^{3/2}
    assert quadrature(u, 3) == pytest.approx(math.pi**1.5, rel=1e-10)


def test_quadrature_warns_on_truncated_tail():
    g = RadialGrid(1e-3, 10.0, 512)
    u = RadialFunction(g, g.nodes**-2.0)
    with pytest.warns(TailWarning):
        quadrature(u, 3)
    ball = RadialFunction(g, np.where(np.arange(512) == 511, 0.0, 1.0), Boundary.BALL_DIRICHLET)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        quadrature(ball, 3)


@pytest.mark.parametrize("case", [(3, 0.0, 0.0), (4, 0.0, 1.0), (4, 0.5, 1.0), (5, 1.0, 0.5), (6, 3.0, 1.5)])
def test_extremal_quotient_matches_closed_form(case):
    u = extremal_interior(*case).on_grid(WHOLE_SPACE_GRID)
    assert rayleigh_quotient(u, ProblemParams(*case)) == pytest.approx(best_constant(*case)[0], rel=1e-6)


def test_quotient_is_scale_invariant():
    case = (5, 1.0, 0.5)
    u = extremal_interior(*case, eps=10.0).on_grid(WHOLE_SPACE_GRID)
    assert rayleigh_quotient(u, case) == pytest.approx(best_constant(*case)[0], rel=1e-6)
    v = u.with_values(3.7 * np.asarray(u.values))
    assert rayleigh_quotient(v, case) == pytest.approx(rayleigh_quotient(u, case), rel=1e-13)


def test_energy_terms_hardy_balance():
    # the extremal satisfies grad - gamma*hardy = M * constraint
    n, g, s = 5, 1.0, 0.5
    u = extremal_interior(n, g, s).on_grid(WHOLE_SPACE_GRID)
    e = energy_terms(u, n, s)
    assert e.gradient - g * e.hardy == pytest.approx(extremal_multiplier(n, g, s) * e.constraint, rel=1e-6)


def test_el_residual_small_and_detects_wrong_multiplier():
    case = (4, 0.5, 1.0)
    u = extremal_interior(*case).on_grid(WHOLE_SPACE_GRID)
    m = extremal_multiplier(*case)
    assert el_residual(u, case, 0.0, m) < 1e-8
    assert el_residual(u, case, 0.0, 1.1 * m) > 1e-2
    with pytest.raises(NonPositive):
        el_residual(u.with_values(-np.asarray(u.values)), case, 0.0, m)


def test_pohozaev():
    assert pohozaev_coefficient(5, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert pohozaev_coefficient(5, 0.5, 0.1) < 0.0
    g = RadialGrid(1e-6, 1.0, 64)
    assert pohozaev_mismatch(RadialFunction(g, np.zeros(64), Boundary.BALL_DIRICHLET), (5, 1.0, 0.5), 0.1) == 0.0


def test_weighted_hardy():
    g = RadialGrid(1e-6, 1.0, 2048)
    x = (g.t - g.t[0]) / (g.t[-1] - g.t[0])
    u = RadialFunction(g, np.sin(math.pi * x) ** 2)
    rho = RadialFunction(g, g.nodes ** (-0.5))
    assert weighted_hardy_check(rho, u, 3) > 0.0
    with pytest.raises(NotAdmissibleWeight):
        weighted_hardy_check(RadialFunction(g, np.ones(2048)), u, 3)
    with pytest.raises(NotAdmissibleWeight):
        weighted_hardy_check(RadialFunction(g, -np.ones(2048)), u, 3)
