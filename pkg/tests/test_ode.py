import math

import numpy as np
import pytest
from scipy.special import jn_zeros

from hardy_ckn.core import beta_exponents
from hardy_ckn.errors import OutOfRange
from hardy_ckn.ode import (
    Branch,
    Potential,
    ShootingConfig,
    first_zero,
    hi_potential_test,
    interior_mass_ball,
    lambda_1_ball,
    lambda_star_ball,
    lambda_star_weight_exponent,
    mass_zero_crossing,
    parse_potential,
    shoot_from_origin,
)


def test_bessel_zero():
    z = first_zero(Potential.constant(1.0), 3.0)
    assert z == pytest.approx(jn_zeros(0, 1)[0], abs=1e-9)
    assert first_zero(Potential.constant(4.0), 3.0) == pytest.approx(jn_zeros(0, 1)[0] / 2, abs=1e-9)
    assert first_zero(Potential.constant(1.0), 2.0) is None


def test_parse_potential():
    assert parse_potential("const:2").power == (2.0, 0.0)
    assert parse_potential("power:1,2").power == (1.0, 2.0)
    assert parse_potential("logsq:1").domain == pytest.approx(1 / math.e)
    assert parse_potential("iterlog:2,1").domain == pytest.approx(math.exp(-math.e))
    for bad in ("foo:1", "const:", "power:1", "iterlog:0,1", "const:-1", "logsq:x"):
        with pytest.raises(OutOfRange):
            parse_potential(bad)


@pytest.mark.parametrize("rho", [0.5, 1.0, 3.0])
def test_log_potentials_are_hi(rho):
    assert hi_potential_test(Potential.log_squared(rho), 0.9 * rho / math.e).is_hi
    P2 = Potential.iterated_log(2, rho)
    assert hi_potential_test(P2, 0.9 * P2.domain).is_hi


@pytest.mark.parametrize("c", [0.1, 1.0, 10.0])
def test_inverse_square_never_hi(c):
    res = hi_potential_test(Potential.power_law(c, 2.0), 1.0)
    assert not res.is_hi and 0.0 < res.first_zero < 1.0


def test_hi_rejects_interval_beyond_domain():
    with pytest.raises(OutOfRange):
        hi_potential_test(Potential.log_squared(1.0), 1.0)


def test_shooting_regular_and_singular_branches():
    n, g = 5, 2.0
    ex = beta_exponents(n, g)
    # with a = 0 each branch is exactly r^-beta
    minus = shoot_from_origin(n, g, 0.0, Branch.MINUS)
    assert np.allclose(minus.u * minus.r**ex.minus, 1.0, rtol=1e-8)
    plus = shoot_from_origin(n, g, 0.0, Branch.PLUS)
    assert np.allclose(plus.u * plus.r**ex.plus, 1.0, rtol=1e-8)
    # constant and callable potentials agree
    c = shoot_from_origin(n, g, 2.0)
    f = shoot_from_origin(n, g, lambda r: 2.0)
    assert np.allclose(c.u, f.u, rtol=1e-7)
    assert c.as_function().grid.count == c.r.size


def test_lambda_1_unit_ball_oracles():
    assert lambda_1_ball(3, 0.0).eigenvalue == pytest.approx(math.pi**2, rel=1e-9)
    # gamma = 0 in dimension 5: first zero of J_{1/2 (n-2)} = J_{3/2}
    from scipy.special import spherical_jn
    from scipy.optimize import brentq

    z = brentq(lambda x: spherical_jn(1, x), 3.0, 5.0)
    assert lambda_1_ball(5, 0.0).eigenvalue == pytest.approx(z * z, rel=1e-9)
    sr = lambda_1_ball(5, 1.0)
    assert sr.sturm_index == 0
    assert sr.bracket_zero_counts == (0, 1)


def test_lambda_star_bessel_oracle():
    from scipy.optimize import brentq
    from scipy.special import jv

    for n, g in [(5, 2.0), (6, 3.5), (4, 0.5)]:
        gap = beta_exponents(n, g).gap
        nu = -gap / 2
        z = brentq(lambda x: jv(nu, x), 0.5, 3.0)
        assert lambda_star_ball(n, g).eigenvalue == pytest.approx(z * z, rel=1e-9)
        assert lambda_star_weight_exponent(n, g) == pytest.approx(1 - gap)


def test_mass_properties():
    n, g = 5, 2.0
    m0 = interior_mass_ball(n, g, 0.0)
    assert m0.mass == pytest.approx(-1.0, abs=1e-9)
    assert m0.mass_integral == pytest.approx(m0.mass, abs=1e-8)
    lams = np.linspace(0, 9, 10)
    masses = [interior_mass_ball(n, g, lam).mass for lam in lams]
    assert np.all(np.diff(masses) > 0)
    with pytest.raises(OutOfRange):
        interior_mass_ball(n, g, 10.0)
    with pytest.raises(OutOfRange):
        interior_mass_ball(n, 1.0, 1.0)


def test_mass_scales_with_radius():
    n, g, lam, R = 5, 2.0, 1.5, 2.0
    gap = beta_exponents(n, g).gap
    mR = interior_mass_ball(n, g, lam, radius=R).mass
    m1 = interior_mass_ball(n, g, lam * R * R).mass
    assert mR == pytest.approx(R ** (-gap) * m1, rel=1e-10)


def test_mass_zero_matches_lambda_star():
    lam0 = mass_zero_crossing(5, 2.0)
    assert lam0 == pytest.approx(math.pi**2 / 4, rel=1e-9)


def test_config_validation():
    with pytest.raises(OutOfRange):
        ShootingConfig(start_radius=0.1)
    with pytest.raises(OutOfRange):
        ShootingConfig(integrator_tolerance=1e-3)
    assert "backend" in ShootingConfig().as_dict()
