import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_ckn import core
from hardy_ckn.core import Location, ProblemParams
from hardy_ckn.errors import DegenerateIndicial, DiscriminantNegative, OutOfRange


def sobolev_oracle(n):
    # pi n (n-2) (Gamma(n/2)/Gamma(n))^(2/n)
    n = mpmath.mpf(n)
    return float(mpmath.pi * n * (n - 2) * (mpmath.gamma(n / 2) / mpmath.gamma(n)) ** (2 / n))


@pytest.mark.parametrize("n", [3, 4, 5, 7, 12])
def test_sobolev_constant_matches_gamma_form(n):
    assert core.mu_sobolev(n) == pytest.approx(sobolev_oracle(n), rel=1e-13)


def test_sobolev_n3_value():
    assert core.mu_sobolev(3) == pytest.approx(3 * (math.pi / 2) ** (4 / 3), rel=1e-14)


def test_sphere_area():
    assert core.sphere_area(2) == pytest.approx(2 * math.pi)
    assert core.sphere_area(3) == pytest.approx(4 * math.pi)
    assert core.sphere_area(4) == pytest.approx(2 * math.pi**2)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_gamma_s_reduces_to_sobolev_and_hardy_sobolev(n):
    assert core.mu_gamma_s(n, 0.0, 0.0) == pytest.approx(core.mu_sobolev(n), rel=1e-13)
    for s in (0.3, 1.0, 1.7):
        assert core.mu_gamma_s(n, 0.0, s) == pytest.approx(core.mu_hardy_sobolev(n, s), rel=1e-13)


def test_gamma_s_vanishes_at_hardy_constant():
    n = 5
    g = (n - 2) ** 2 / 4
    assert core.mu_gamma_s(n, g * (1 - 1e-12), 0.5) < 1e-4
    with pytest.raises(OutOfRange):
        core.mu_gamma_s(n, g, 0.5)


def test_gamma_s_large_dimension_is_finite():
    assert math.isfinite(core.mu_gamma_s(400, 10.0, 1.0))


def test_best_constant_dispatch():
    assert core.best_constant(3, 0, 0)[1] == "sobolev"
    assert core.best_constant(4, 0, 1)[1] == "hardy_sobolev"
    assert core.best_constant(4, 0, 2) == (1.0, "hardy")
    assert core.best_constant(4, 0.5, 1)[1] == "gamma_s"


def test_problem_params_validation():
    with pytest.raises(OutOfRange):
        ProblemParams(2, 0, 0)
    with pytest.raises(OutOfRange):
        ProblemParams(3, 0.25, 0)
    with pytest.raises(OutOfRange):
        ProblemParams(3, 0, 2.5)
    with pytest.raises(OutOfRange):
        ProblemParams(3, 2.25, 0, Location.BOUNDARY)
    assert ProblemParams(3, 2.2, 0, Location.BOUNDARY).gamma_hardy == 2.25
    assert ProblemParams(5, 1, 0.5).p == pytest.approx(2 * 4.5 / 3)


def test_exponent_errors():
    with pytest.raises(DiscriminantNegative):
        core.beta_exponents(3, 0.3)
    ex = core.beta_exponents(4, 1.0)
    assert ex.degenerate and ex.minus == ex.plus == 1.0
    with pytest.raises(DegenerateIndicial):
        core.require_nondegenerate(ex)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 40), st.floats(1e-9, 200.0))
def test_exponent_invariants(n, drop):
    gamma = (n - 2) ** 2 / 4 - drop
    b = core.beta_exponents(n, gamma)
    assert b.plus + b.minus == pytest.approx(n - 2, rel=1e-12, abs=1e-12)
    assert b.plus * b.minus == pytest.approx(gamma, rel=1e-10, abs=1e-10)
    assert b.minus <= (n - 2) / 2 <= b.plus
    a = core.alpha_exponents(n, gamma)
    assert a.plus + a.minus == pytest.approx(n, rel=1e-12)
    assert a.plus * a.minus == pytest.approx(gamma, rel=1e-10, abs=1e-10)


@settings(max_examples=300, deadline=None)
@given(st.integers(3, 20), st.floats(0.0, 50.0), st.floats(0.0, 2.0))
def test_ckn_round_trip(n, drop, s):
    gamma = (n - 2) ** 2 / 4 - 1e-6 - drop
    c = core.hardy_to_ckn(gamma, s, n)
    back = core.ckn_to_hardy(c.a, c.b, n)
    assert back.gamma == pytest.approx(gamma, abs=1e-11 * (1 + abs(gamma)))
    assert back.s == pytest.approx(s, abs=1e-12)
    assert back.q == pytest.approx(core.critical_exponent(n, s), rel=1e-13)


def test_ckn_bounds():
    with pytest.raises(OutOfRange):
        core.ckn_to_hardy(0.6, 0.7, 3)
    with pytest.raises(OutOfRange):
        core.ckn_to_hardy(0.0, 1.5, 3)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1.0, 100.0))
def test_critical_dimension_interior(gamma):
    ng = core.critical_dimension_interior(gamma)
    assert math.sqrt((ng - 2) ** 2 - 4 * gamma) == pytest.approx(2.0, abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 100.0))
def test_critical_dimension_boundary(gamma):
    nb = core.critical_dimension_boundary(gamma)
    assert math.sqrt(max(nb * nb - 4 * gamma, 0.0)) == pytest.approx(1.0, abs=1e-10)


def test_cone_hardy_constant():
    assert core.gamma_hardy_cone(5, 0) == pytest.approx(9 / 4)
    assert core.gamma_hardy_cone(5, 1) == pytest.approx(25 / 4)


def test_extremal_multiplier_closed_form():
    # M = (n-s)((n-2)^2 - 4 gamma)/(n-2); at gamma=0, s=0 this is n(n-2)
    assert core.extremal_multiplier(5, 0, 0) == pytest.approx(15)
    assert core.extremal_multiplier(5, 2, 0) == pytest.approx(5 * 1 / 3)


def test_extremal_profile_asymptotics():
    ex = core.extremal_interior(5, 1.0, 0.5)
    e = ex.exponents
    r_small, r_large = 1e-12, 1e12
    assert ex(r_small) * r_small ** e.minus == pytest.approx(1.0, rel=1e-6)
    assert ex(r_large) * r_large ** e.plus == pytest.approx(1.0, rel=1e-6)
    scaled = core.extremal_interior(5, 1.0, 0.5, eps=0.1)
    assert scaled(0.1) == pytest.approx(0.1 ** (-1.5) * ex(1.0), rel=1e-14)


def test_halfspace_linear_solution_solves_equation():
    import numpy as np

    f = core.halfspace_linear_solution(3, 1.0, 0.7, 1.3)
    x = np.array([[0.7, 0.2, -0.4]])
    h = 1e-3
    lap = 0.0
    for i in range(3):
        e = np.zeros(3)
        e[i] = h
        lap += (f(x + e) - 2 * f(x) + f(x - e)) / h**2
    r2 = float((x**2).sum())
    assert float(lap[0] + 1.0 * f(x)[0] / r2) == pytest.approx(0.0, abs=1e-4)
    assert float(f(np.array([0.0, 1.0, 2.0]))) == 0.0
