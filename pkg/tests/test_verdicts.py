import zlib

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardy_ckn.anchors import ANCHORS
from hardy_ckn.core import Location, ProblemParams
from hardy_ckn.errors import OutOfRange
from hardy_ckn.ode import lambda_1_ball
from hardy_ckn.verdicts import (
    RULES,
    TABLES,
    Attained,
    GeometricData,
    boundary_verdict,
    cone_verdict,
    hardy_constant_verdict,
    interior_verdict,
    render_table,
)
from hardy_ckn.verification import row_cases

YES, NO, UNKNOWN = Attained.YES, Attained.NO, Attained.UNKNOWN


def interior(n, g, s):
    return ProblemParams(n, g, s, Location.INTERIOR)


def boundary(n, g, s):
    return ProblemParams(n, g, s, Location.BOUNDARY)


# documented examples ---------------------------------------------------------

def test_interior_examples():
    lam1 = lambda_1_ball(5, 0.0).eigenvalue
    v = interior_verdict(interior(5, 0.0, 1.0), 0.1 * lam1, GeometricData())
    assert (v.attained, v.rule) == (YES, "table1.row1")
    v = interior_verdict(interior(4, -1.0, 0.0), 0.0, GeometricData())
    assert (v.attained, v.rule) == (NO, "table2.row2")
    v = interior_verdict(interior(5, 2.0, 0.0), 1.0, GeometricData(interior_mass_sign="Positive"))
    assert (v.attained, v.rule) == (YES, "table1.row4")


def test_boundary_examples():
    v = boundary_verdict(boundary(4, 1.0, 0.0), GeometricData(mean_curvature_sign="Negative"))
    assert (v.attained, v.rule) == (YES, "table3.row3")
    v = boundary_verdict(boundary(3, 2.1, 0.0), GeometricData(boundary_mass_sign="Positive", robin_mass_sign="Positive"))
    assert (v.attained, v.rule) == (YES, "table4.row3")
    v = boundary_verdict(boundary(5, -1.0, 0.0), GeometricData())
    assert (v.attained, v.rule) == (NO, "table4.row1")


def test_cone_examples():
    assert cone_verdict(4, 1.0, 0.0, "HalfSpace").attained is YES
    v = cone_verdict(3, 1.0, 0.0, "HalfSpace")
    assert (v.attained, v.rule) == (UNKNOWN, "cone.n3-unsettled")
    assert cone_verdict(3, -0.5, 0.0, "WholeSpace").attained is NO
    assert cone_verdict(3, 0.0, 0.0, "WholeSpace").attained is YES
    assert cone_verdict(3, 0.0, 0.0, "Cone", contains_full_space=True).attained is YES
    assert cone_verdict(3, 0.0, 0.0, "Cone").attained is NO
    assert cone_verdict(3, -5.0, 0.0, "HalfSpace").attained is NO
    assert cone_verdict(3, -5.0, 0.5, "HalfSpace").attained is YES
    with pytest.raises(OutOfRange):
        cone_verdict(3, 0.25, 0.5, "WholeSpace")
    with pytest.raises(OutOfRange):
        cone_verdict(3, 2.25, 0.5, "HalfSpace")
    with pytest.raises(OutOfRange):
        cone_verdict(3, 1.0, 0.5, "Cone", gamma_h=1.0)


def test_hardy_constant_examples():
    hv = hardy_constant_verdict("Ball", "Interior", 5)
    assert (hv.value, hv.attained) == (2.25, NO)
    hv = hardy_constant_verdict("HalfSpace", "Boundary", 5)
    assert (hv.value, hv.attained) == (6.25, NO)
    hv = hardy_constant_verdict("BoundedSmooth", "Boundary", 3, gamma_h=2.0)
    assert hv.attained is YES and hv.interval == (0.25, 2.25)
    hv = hardy_constant_verdict("BoundedSmooth", "Boundary", 3)
    assert hv.value is None and hv.attained is UNKNOWN
    assert hardy_constant_verdict("BoundedSmooth", "Boundary", 3, gamma_h=2.25).attained is UNKNOWN
    with pytest.raises(OutOfRange):
        hardy_constant_verdict("BoundedSmooth", "Boundary", 3, gamma_h=3.0)


# branch details --------------------------------------------------------------

def test_unknown_propagation_lists_missing_inputs():
    v = interior_verdict(interior(5, 2.0, 0.0), 1.0, GeometricData())
    assert v.attained is UNKNOWN and v.required_inputs_missing == ("interior_mass_sign",)
    v = boundary_verdict(boundary(3, 1.0, 0.0), GeometricData(mean_curvature_sign="Negative"))
    assert v.attained is UNKNOWN and v.required_inputs_missing == ("robin_mass_sign",)
    v = interior_verdict(interior(4, -1.0, 0.0), 2.0, GeometricData())
    assert v.attained is UNKNOWN and v.required_inputs_missing == ("r_omega",)


def test_zero_signs_are_not_enough():
    v = boundary_verdict(boundary(4, 1.0, 0.5), GeometricData(mean_curvature_sign="Zero"))
    assert v.attained is UNKNOWN and v.rule == "boundary.sufficient-only"
    v = interior_verdict(interior(5, 2.0, 0.0), 1.0, GeometricData(interior_mass_sign="Zero"))
    assert v.attained is UNKNOWN and v.rule == "open-problem"
    v = interior_verdict(interior(5, 2.0, 0.0), 1.0, GeometricData(interior_mass_sign="Negative"))
    assert v.rule == "open-problem"


def test_ball_uses_computed_mass():
    ball = GeometricData(domain_kind="Ball")
    below = interior_verdict(interior(5, 2.0, 0.0), 2.4, ball)
    above = interior_verdict(interior(5, 2.0, 0.0), 2.5, ball)
    assert (below.attained, below.rule) == (NO, "ball.lambda-star")
    assert (above.attained, above.rule) == (YES, "table1.row4")
    assert below.computed["interior_mass"] < 0 < above.computed["interior_mass"]
    with pytest.raises(OutOfRange):
        interior_verdict(interior(5, 2.0, 0.0), 10.0, ball)
    # radius R ball: lambda* scales like R^-2
    big = GeometricData(domain_kind="Ball", ball_radius=2.0)
    assert interior_verdict(interior(5, 2.0, 0.0), 2.4 / 4, big).attained is NO
    assert interior_verdict(interior(5, 2.0, 0.0), 2.5 / 4, big).attained is YES


def test_unperturbed_interior_is_not_attained():
    for s in (0.0, 0.5):
        v = interior_verdict(interior(6, 1.0, s), 0.0, GeometricData(interior_mass_sign="Positive"))
        assert (v.attained, v.rule) == (NO, "interior.unperturbed")


def test_ratio_threshold_is_closed():
    geo = GeometricData(r_omega=2.0)
    assert interior_verdict(interior(4, -1.0, 0.0), 0.5, geo).attained is NO
    assert interior_verdict(interior(4, -1.0, 0.0), 0.5 + 1e-12, geo).attained is YES


def test_n3_negative_gamma_needs_robin_mass():
    geo = GeometricData(r_omega=1.0, robin_mass_sign="Positive")
    v = interior_verdict(interior(3, -0.5, 0.0), 1.0, geo)
    assert (v.attained, v.rule) == (YES, "table2.row3")
    # below the ratio threshold "No" holds regardless of the Robin mass
    assert interior_verdict(interior(3, -0.5, 0.0), 0.3, geo).attained is NO


def test_input_validation():
    with pytest.raises(OutOfRange):
        interior_verdict(interior(5, 1.0, 0.5), -1.0)
    with pytest.raises(OutOfRange):
        interior_verdict(interior(5, 1.0, 0.5), 5.0, GeometricData(lambda_1=4.0))
    with pytest.raises(OutOfRange):
        interior_verdict(interior(5, 1.0, 2.0), 1.0)
    with pytest.raises(OutOfRange):
        interior_verdict(boundary(5, 1.0, 0.5), 1.0)
    with pytest.raises(OutOfRange):
        boundary_verdict(interior(5, 1.0, 0.5))
    with pytest.raises(OutOfRange):
        boundary_verdict(boundary(3, 2.0, 0.5), GeometricData(gamma_h=1.5))


# tables and consistency ------------------------------------------------------

def test_table_row_counts():
    assert [len(render_table(k)) for k in (1, 2, 3, 4)] == [4, 3, 4, 3]
    with pytest.raises(OutOfRange):
        render_table(5)


def test_every_rule_has_an_anchor():
    for k in (1, 2, 3, 4):
        for rec in render_table(k):
            assert rec["rule"] in RULES
    assert set(RULES) <= set(ANCHORS)


@pytest.mark.parametrize("row", [r for k in (1, 2, 3, 4) for r in TABLES[k]], ids=lambda r: r.rule)
def test_verdicts_agree_with_rows(row):
    rng = np.random.default_rng(zlib.crc32(row.rule.encode()))
    n_cases = 0
    for params, lam, geo in row_cases(row, rng):
        n_cases += 1
        if params.location is Location.INTERIOR:
            v = interior_verdict(params, lam, geo)
        else:
            v = boundary_verdict(params, geo)
        assert v.attained is row.extremal, (params, lam)
        assert v.rule == row.rule
    assert n_cases > 0


@settings(max_examples=200, deadline=None)
@given(
    st.integers(3, 9),
    st.floats(-10.0, 1.0),
    st.floats(0.0, 1.99),
    st.floats(0.0, 20.0),
    st.sampled_from(["Negative", "Zero", "Positive", "Unknown"]),
)
def test_interior_verdict_is_deterministic_and_cited(n, gfrac, s, lam, sign):
    g = gfrac * (n - 2) ** 2 / 4 * 0.999 if gfrac > 0 else gfrac
    geo = GeometricData(interior_mass_sign=sign, robin_mass_sign=sign, r_omega=1.0)
    a = interior_verdict(interior(n, g, s), lam, geo)
    b = interior_verdict(interior(n, g, s), lam, geo)
    assert a == b
    assert a.rule in RULES
    if a.attained is UNKNOWN:
        assert a.required_inputs_missing or a.rule == "open-problem"


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 8), st.floats(0.0, 1.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_mass_branch_monotone_in_lambda(n, gfrac, l1, l2):
    # upper gamma range, positive mass: Yes persists for larger lambda
    lo, hi = (n - 2) ** 2 / 4 - 1, (n - 2) ** 2 / 4
    g = lo + (hi - lo) * (0.01 + 0.98 * gfrac)
    lam, lam2 = sorted((1e-3 + l1, 1e-3 + l2))
    geo = GeometricData(interior_mass_sign="Positive", lambda_1=2.0)
    if interior_verdict(interior(n, g, 0.5), lam, geo).attained is YES:
        assert interior_verdict(interior(n, g, 0.5), lam2, geo).attained is YES


@settings(max_examples=100, deadline=None)
@given(st.integers(3, 8), st.floats(-20.0, 0.0))
def test_halfspace_nonpositive_gamma_never_attained_for_s0(n, g):
    assert cone_verdict(n, g, 0.0, "HalfSpace").attained is NO
    assert boundary_verdict(boundary(n, g, 0.0)).attained is NO
