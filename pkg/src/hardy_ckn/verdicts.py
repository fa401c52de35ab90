"""Attainability decisions for Hardy-Sobolev best constants.

Each decision names the rule that fired.  Rule identifiers are either table
rows (``table<k>.row<j>``) or named clauses; all of them are listed in
:data:`RULES` with a short statement of the result they encode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

from .core import Location, ProblemParams
from .errors import OutOfRange

__all__ = [
    "Sign",
    "Attained",
    "DomainKind",
    "GeometricData",
    "Verdict",
    "HardyConstantVerdict",
    "TableRow",
    "TABLES",
    "RULES",
    "interior_verdict",
    "boundary_verdict",
    "cone_verdict",
    "hardy_constant_verdict",
    "render_table",
]


class Sign(str, enum.Enum):
    NEGATIVE = "Negative"
    ZERO = "Zero"
    POSITIVE = "Positive"
    UNKNOWN = "Unknown"


class Attained(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


class DomainKind(str, enum.Enum):
    BALL = "Ball"
    BOUNDED_SMOOTH = "BoundedSmooth"
    HALF_SPACE = "HalfSpace"
    CONE = "Cone"
    WHOLE_SPACE = "WholeSpace"


@dataclass(frozen=True)
class GeometricData:
    """Signs of geometric invariants, plus optional scalar data.

    ``r_omega`` is ``sup |x|^2`` over the domain; for a ball centred at the
    singularity it defaults to ``ball_radius^2``.
    """

    mean_curvature_sign: Sign = Sign.UNKNOWN
    boundary_mass_sign: Sign = Sign.UNKNOWN
    interior_mass_sign: Sign = Sign.UNKNOWN
    robin_mass_sign: Sign = Sign.UNKNOWN
    domain_kind: DomainKind = DomainKind.BOUNDED_SMOOTH
    contains_full_space: bool = False
    ball_radius: float = 1.0
    r_omega: Optional[float] = None
    lambda_1: Optional[float] = None
    gamma_h: Optional[float] = None

    def __post_init__(self):
        for name in ("mean_curvature_sign", "boundary_mass_sign", "interior_mass_sign", "robin_mass_sign"):
            object.__setattr__(self, name, Sign(getattr(self, name)))
        object.__setattr__(self, "domain_kind", DomainKind(self.domain_kind))

    @property
    def sup_norm_squared(self) -> Optional[float]:
        if self.r_omega is not None:
            return self.r_omega
        if self.domain_kind is DomainKind.BALL:
            return self.ball_radius**2
        return None


@dataclass(frozen=True)
class Verdict:
    attained: Attained
    rule: str
    citation: str
    required_inputs_missing: tuple = ()
    computed: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "attained": self.attained.value,
            "rule": self.rule,
            "citation": self.citation,
            "required_inputs_missing": list(self.required_inputs_missing),
            "computed": dict(self.computed),
        }


@dataclass(frozen=True)
class HardyConstantVerdict:
    value: Optional[float]
    interval: Optional[tuple]
    attained: Attained
    rule: str
    citation: str


# tables --------------------------------------------------------------------

@dataclass(frozen=True)
class TableRow:
    """One row of a decision table.

    ``cells`` holds the LaTeX text of each column; ``plain`` a plain-text
    rendering.  The remaining fields describe the row's parameter region:
    ``gamma_range(n)`` returns ``(lo, lo_closed, hi, hi_closed)``.
    """

    table: int
    row: int
    cells: tuple
    plain: tuple
    extremal: Attained
    s_kind: str  # "pos" or "zero"
    dim: tuple  # ("ge", k) or ("eq", k)
    gamma_range: object = field(compare=False, repr=False)
    condition: str = ""

    @property
    def rule(self) -> str:
        return f"table{self.table}.row{self.row}"

    def dimension_ok(self, n: int) -> bool:
        op, k = self.dim
        return n >= k if op == "ge" else n == k

    def gamma_ok(self, n: int, gamma: float) -> bool:
        lo, lo_c, hi, hi_c = self.gamma_range(n)
        above = gamma >= lo if lo_c else gamma > lo
        below = gamma <= hi if hi_c else gamma < hi
        return above and below


COLUMNS = {
    1: ("hardy_term", "dimension", "singularity", "condition", "extremal"),
    2: ("hardy_term", "dimension", "condition", "extremal"),
    3: ("hardy_term", "singularity", "dimension", "condition", "extremal"),
    4: ("hardy_term", "singularity", "dimension", "condition", "extremal"),
}

CAPTIONS = {
    1: "Interior singularity, 0 <= lambda < lambda_1, and s > 0 or (s = 0 and gamma >= 0)",
    2: "Interior singularity, 0 <= lambda < lambda_1, s = 0 and gamma < 0",
    3: "Boundary singularity, s > 0 or (s = 0, gamma > 0 and n >= 4)",
    4: "Boundary singularity, s = 0, remaining cases",
}

INF = math.inf


def _q(n):
    return (n - 2) ** 2 / 4.0


def _b(n):
    return (n * n - 1) / 4.0


_ROWS = [
    TableRow(1, 1,
             (r"-\infty < \gamma \leq \frac{(n-2)^2}{4}-1", r"n\geq 3", r"s > 0", r"\lambda>0", "Yes"),
             ("-inf < gamma <= (n-2)^2/4 - 1", "n >= 3", "s > 0", "lambda > 0", "Yes"),
             Attained.YES, "pos", ("ge", 3), lambda n: (-INF, False, _q(n) - 1, True), "lambda_pos"),
    TableRow(1, 2,
             (r"\frac{(n-2)^2}{4}-1 < \gamma <\frac{(n-2)^2}{4}", r"n\geq 3", r"s >0",
              r"m_{\gamma, -\lambda}(\Omega) >0", "Yes"),
             ("(n-2)^2/4 - 1 < gamma < (n-2)^2/4", "n >= 3", "s > 0", "m_{gamma,-lambda}(Omega) > 0", "Yes"),
             Attained.YES, "pos", ("ge", 3), lambda n: (_q(n) - 1, False, _q(n), False), "mass_pos"),
    TableRow(1, 3,
             (r"0\leq \gamma \leq \frac{(n-2)^2}{4}-1", r"n\geq 4", r"s = 0", r"\lambda>0", "Yes"),
             ("0 <= gamma <= (n-2)^2/4 - 1", "n >= 4", "s = 0", "lambda > 0", "Yes"),
             Attained.YES, "zero", ("ge", 4), lambda n: (0.0, True, _q(n) - 1, True), "lambda_pos"),
    TableRow(1, 4,
             (r"\frac{(n-2)^2}{4}-1< \gamma <\frac{(n-2)^2}{4}", r"n\geq 4", r"s=0",
              r"m_{\gamma, -\lambda}(\Omega) >0", "Yes"),
             ("(n-2)^2/4 - 1 < gamma < (n-2)^2/4", "n >= 4", "s = 0", "m_{gamma,-lambda}(Omega) > 0", "Yes"),
             Attained.YES, "zero", ("ge", 4), lambda n: (_q(n) - 1, False, _q(n), False), "mass_pos"),
    TableRow(2, 1,
             (r"-\infty < \gamma<0", r"n\geq 4", r"\frac{|\gamma|}{r(\Omega)}<\lambda", "Yes"),
             ("-inf < gamma < 0", "n >= 4", "|gamma|/r(Omega) < lambda", "Yes"),
             Attained.YES, "zero", ("ge", 4), lambda n: (-INF, False, 0.0, False), "lambda_above_ratio"),
    TableRow(2, 2,
             (r"-\infty < \gamma<0", r"n\geq 3", r"\lambda \leq \frac{|\gamma|}{r(\Omega)}", "No"),
             ("-inf < gamma < 0", "n >= 3", "lambda <= |gamma|/r(Omega)", "No"),
             Attained.NO, "zero", ("ge", 3), lambda n: (-INF, False, 0.0, False), "lambda_below_ratio"),
    TableRow(2, 3,
             (r"-\infty < \gamma\leq 0", r"n = 3", r"R_{\gamma, \lambda}(\Omega) >0", "Yes"),
             ("-inf < gamma <= 0", "n = 3", "R_{gamma,lambda}(Omega) > 0", "Yes"),
             Attained.YES, "zero", ("eq", 3), lambda n: (-INF, False, 0.0, True), "robin_pos"),
    TableRow(3, 1,
             (r"-\infty < \gamma \leq \frac{n^2-1}{4}", r"s>0", r"n\geq 3", r"H_\Omega(0)<0", "Yes"),
             ("-inf < gamma <= (n^2-1)/4", "s > 0", "n >= 3", "H_Omega(0) < 0", "Yes"),
             Attained.YES, "pos", ("ge", 3), lambda n: (-INF, False, _b(n), True), "curvature_neg"),
    TableRow(3, 2,
             (r"\frac{n^2-1}{4} <\gamma <\frac{n^2}{4}", r"s>0", r"n\geq 3", r"b_\gamma(\Omega)>0", "Yes"),
             ("(n^2-1)/4 < gamma < n^2/4", "s > 0", "n >= 3", "b_gamma(Omega) > 0", "Yes"),
             Attained.YES, "pos", ("ge", 3), lambda n: (_b(n), False, n * n / 4.0, False), "boundary_mass_pos"),
    TableRow(3, 3,
             (r"0 < \gamma \leq \frac{n^2-1}{4}", r"s=0", r"n\geq 4", r"H_\Omega(0)<0", "Yes"),
             ("0 < gamma <= (n^2-1)/4", "s = 0", "n >= 4", "H_Omega(0) < 0", "Yes"),
             Attained.YES, "zero", ("ge", 4), lambda n: (0.0, False, _b(n), True), "curvature_neg"),
    TableRow(3, 4,
             (r"\frac{n^2-1}{4} <\gamma <\frac{n^2}{4}", r"s=0", r"n\geq 4", r"b_\gamma(\Omega)>0", "Yes"),
             ("(n^2-1)/4 < gamma < n^2/4", "s = 0", "n >= 4", "b_gamma(Omega) > 0", "Yes"),
             Attained.YES, "zero", ("ge", 4), lambda n: (_b(n), False, n * n / 4.0, False), "boundary_mass_pos"),
    TableRow(4, 1,
             (r"\gamma \leq 0", r"s=0", r"n\geq 3", r"--", "No"),
             ("gamma <= 0", "s = 0", "n >= 3", "--", "No"),
             Attained.NO, "zero", ("ge", 3), lambda n: (-INF, False, 0.0, True), "none"),
    TableRow(4, 2,
             (r"0<\gamma \leq 2", r"s=0", r"n= 3", r"H_\Omega(0)<0 and R_{\gamma, 0}(\Omega)>0", "Yes"),
             ("0 < gamma <= 2", "s = 0", "n = 3", "H_Omega(0) < 0 and R_{gamma,0}(Omega) > 0", "Yes"),
             Attained.YES, "zero", ("eq", 3), lambda n: (0.0, False, 2.0, True), "curvature_neg_and_robin_pos"),
    TableRow(4, 3,
             (r"2< \gamma <\frac{9}{4}", r"s=0", r"n=3", r"b_\gamma(\Omega)>0 and R_{\gamma, 0}(\Omega)>0", "Yes"),
             ("2 < gamma < 9/4", "s = 0", "n = 3", "b_gamma(Omega) > 0 and R_{gamma,0}(Omega) > 0", "Yes"),
             Attained.YES, "zero", ("eq", 3), lambda n: (2.0, False, 9.0 / 4.0, False), "boundary_mass_pos_and_robin_pos"),
]

TABLES = {k: tuple(r for r in _ROWS if r.table == k) for k in (1, 2, 3, 4)}


RULES = {
    "table1.row1": "Interior, s > 0, gamma <= (n-2)^2/4 - 1: extremal iff lambda > 0.",
    "table1.row2": "Interior, s > 0, (n-2)^2/4 - 1 < gamma < (n-2)^2/4: extremal if the interior mass m_{gamma,-lambda} is positive.",
    "table1.row3": "Interior, s = 0, 0 <= gamma <= (n-2)^2/4 - 1 (so n >= 4): extremal iff lambda > 0.",
    "table1.row4": "Interior, s = 0, n >= 4, (n-2)^2/4 - 1 < gamma < (n-2)^2/4: extremal if the interior mass is positive.",
    "table2.row1": "Interior, s = 0, gamma < 0, n >= 4: extremal if |gamma|/r(Omega) < lambda < lambda_1.",
    "table2.row2": "Interior, s = 0, gamma < 0: no extremal when 0 <= lambda <= |gamma|/r(Omega).",
    "table2.row3": "Interior, s = 0, gamma <= 0, n = 3: extremal if the Robin mass R_{gamma,lambda} is positive.",
    "table3.row1": "Boundary, s > 0, gamma <= (n^2-1)/4: extremal if the mean curvature at 0 is negative.",
    "table3.row2": "Boundary, s > 0, (n^2-1)/4 < gamma < n^2/4: extremal if the boundary mass b_gamma is positive.",
    "table3.row3": "Boundary, s = 0, n >= 4, 0 < gamma <= (n^2-1)/4: extremal if the mean curvature at 0 is negative.",
    "table3.row4": "Boundary, s = 0, n >= 4, (n^2-1)/4 < gamma < n^2/4: extremal if the boundary mass is positive.",
    "table4.row1": "Boundary, s = 0, gamma <= 0: the constant equals the Sobolev constant and has no extremal.",
    "table4.row2": "Boundary, s = 0, n = 3, 0 < gamma <= 2: extremal if the mean curvature is negative and the Robin mass R_{gamma,0} is positive.",
    "table4.row3": "Boundary, s = 0, n = 3, 2 < gamma < 9/4: extremal if the boundary mass and the Robin mass R_{gamma,0} are positive.",
    "interior.unperturbed": "Interior, lambda = 0, s > 0 or gamma >= 0: the constant equals its whole-space value and has no extremal on a bounded domain.",
    "interior.mass-n3": "Interior, s = 0, n = 3, gamma >= 0 > (n-2)^2/4 - 1: extremal if the interior mass is positive.",
    "ball.lambda-star": "Interior, unit ball, upper gamma range: extremal iff lambda >= lambda*, the zero of the interior mass.",
    "open-problem": "Regime the known results leave open.",
    "boundary.sufficient-only": "Boundary: the supplied sign does not meet the sufficient condition; attainment undecided.",
    "cone.full-space-attained": "Whole space (or a cone filling it): attained if s > 0 or (s = 0, gamma >= 0).",
    "cone.full-space-not-attained": "Whole space (or a cone filling it): not attained if s = 0 and gamma < 0.",
    "cone.proper-attained": "Proper cone or half-space: attained if s > 0 or (s = 0, gamma > 0, n >= 4).",
    "cone.proper-not-attained": "Proper cone or half-space: no extremal when s = 0 and gamma <= 0.",
    "cone.n3-unsettled": "Proper cone or half-space, s = 0, gamma > 0, n = 3: unsettled.",
    "hardy.interior": "Interior singularity: Hardy constant (n-2)^2/4, never attained.",
    "hardy.halfspace": "Half-space: Hardy constant n^2/4, not attained.",
    "hardy.bounded-boundary": "Bounded smooth domain with 0 on the boundary: Hardy constant in ((n-2)^2/4, n^2/4], attained iff below n^2/4.",
    "hardy.cone": "Cone R^k_+ x R^(n-k): Hardy constant ((n+2k-2)/2)^2, not attained.",
}


def _cite(rule: str) -> str:
    return f"{rule}: {RULES[rule]}"


def _verdict(att: Attained, rule: str, missing=(), **computed) -> Verdict:
    return Verdict(att, rule, _cite(rule), tuple(missing), computed)


def render_table(which: int) -> list[dict]:
    """Rows of decision table ``which`` (1-4) as records.

    Each record has ``table``, ``row``, ``rule``, ``columns``, ``cells``
    (LaTeX) and ``plain`` (plain text).
    """
    if which not in TABLES:
        raise OutOfRange(f"table must be 1, 2, 3 or 4, got {which}")
    cols = COLUMNS[which]
    out = []
    for row in TABLES[which]:
        out.append(
            {
                "table": which,
                "row": row.row,
                "rule": row.rule,
                "caption": CAPTIONS[which],
                "columns": list(cols),
                "cells": dict(zip(cols, row.cells)),
                "plain": dict(zip(cols, row.plain)),
            }
        )
    return out


# interior ------------------------------------------------------------------

def _ball_mass_sign(params: ProblemParams, lam: float, geo: GeometricData) -> tuple[Sign, dict]:
    from .ode import interior_mass_ball

    res = interior_mass_ball(params.n, params.gamma, lam, radius=geo.ball_radius)
    m = res.mass
    sign = Sign.POSITIVE if m > 0 else Sign.NEGATIVE if m < 0 else Sign.ZERO
    return sign, {"interior_mass": m, "fit_residual": res.fit_residual}


def interior_verdict(params: ProblemParams, lam: float, geo: GeometricData = GeometricData()) -> Verdict:
    """Decide attainment for a singularity inside a bounded domain.

    Parameters
    ----------
    params : ProblemParams
        Must have ``location = Interior`` and ``s < 2``.
    lam : float
        Perturbation, ``0 <= lam < lambda_1`` (checked when ``geo.lambda_1``
        is given).
    geo : GeometricData
        For a ball the interior mass sign is computed when not supplied.
    """
    if params.location is not Location.INTERIOR:
        raise OutOfRange("interior_verdict needs an interior singularity")
    n, gamma, s = params.n, params.gamma, params.s
    if not s < 2.0:
        raise OutOfRange("s must be below 2")
    if not (math.isfinite(lam) and lam >= 0.0):
        raise OutOfRange(f"lambda must be finite and nonnegative, got {lam}")
    if geo.domain_kind not in (DomainKind.BALL, DomainKind.BOUNDED_SMOOTH):
        raise OutOfRange("interior_verdict applies to bounded domains")
    lam1 = geo.lambda_1
    if lam1 is None and geo.domain_kind is DomainKind.BALL:
        from .ode import lambda_1_ball

        lam1 = lambda_1_ball(n, gamma).eigenvalue / geo.ball_radius**2
    if lam1 is not None and lam >= lam1:
        raise OutOfRange(f"lambda={lam} must be below lambda_1={lam1}")

    if s > 0.0 or gamma >= 0.0:
        table_rows = (1, 2) if s > 0.0 else (3, 4)
        if lam == 0.0:
            return _verdict(Attained.NO, "interior.unperturbed")
        thr = (n - 2) ** 2 / 4.0 - 1.0
        if gamma <= thr:
            return _verdict(Attained.YES, f"table1.row{table_rows[0]}")
        mass_rule = f"table1.row{table_rows[1]}" if (s > 0.0 or n >= 4) else "interior.mass-n3"
        sign = geo.interior_mass_sign
        computed = {}
        if sign is Sign.UNKNOWN and geo.domain_kind is DomainKind.BALL:
            sign, computed = _ball_mass_sign(params, lam, geo)
        if sign is Sign.POSITIVE:
            return _verdict(Attained.YES, mass_rule, **computed)
        if s == 0.0 and n == 3 and gamma == 0.0 and geo.robin_mass_sign is Sign.POSITIVE:
            return _verdict(Attained.YES, "table2.row3", **computed)
        if geo.domain_kind is DomainKind.BALL and sign in (Sign.NEGATIVE, Sign.ZERO):
            att = Attained.YES if sign is Sign.ZERO else Attained.NO
            return _verdict(att, "ball.lambda-star", **computed)
        if sign is Sign.UNKNOWN:
            return _verdict(Attained.UNKNOWN, mass_rule, ("interior_mass_sign",))
        return _verdict(Attained.UNKNOWN, "open-problem", **computed)

    # s = 0, gamma < 0
    r_om = geo.sup_norm_squared
    if r_om is None:
        if lam == 0.0:
            return _verdict(Attained.NO, "table2.row2")
        return _verdict(Attained.UNKNOWN, "table2.row2", ("r_omega",))
    if lam <= abs(gamma) / r_om:
        return _verdict(Attained.NO, "table2.row2")
    if n >= 4:
        return _verdict(Attained.YES, "table2.row1")
    if geo.robin_mass_sign is Sign.POSITIVE:
        return _verdict(Attained.YES, "table2.row3")
    if geo.robin_mass_sign is Sign.UNKNOWN:
        return _verdict(Attained.UNKNOWN, "table2.row3", ("robin_mass_sign",))
    return _verdict(Attained.UNKNOWN, "open-problem")


# boundary ------------------------------------------------------------------

def _need(geo: GeometricData, *pairs) -> tuple[bool, list, bool]:
    """Check ``(field, required_sign)`` pairs: (all met, missing, any violated)."""
    missing, violated = [], False
    for name, want in pairs:
        got = getattr(geo, name)
        if got is Sign.UNKNOWN:
            missing.append(name)
        elif got is not want:
            violated = True
    return (not missing and not violated), missing, violated


def boundary_verdict(params: ProblemParams, geo: GeometricData = GeometricData()) -> Verdict:
    """Decide attainment for a singularity on the boundary of a bounded domain."""
    if params.location is not Location.BOUNDARY:
        raise OutOfRange("boundary_verdict needs a boundary singularity")
    n, gamma, s = params.n, params.gamma, params.s
    if not s < 2.0:
        raise OutOfRange("s must be below 2")
    if geo.gamma_h is not None and gamma >= geo.gamma_h:
        raise OutOfRange(f"gamma={gamma} must be below the Hardy constant {geo.gamma_h}")
    if s == 0.0 and gamma <= 0.0:
        return _verdict(Attained.NO, "table4.row1")
    if s > 0.0 or n >= 4:
        lower = gamma <= (n * n - 1) / 4.0
        idx = (1 if lower else 2) + (0 if s > 0.0 else 2)
        rule = f"table3.row{idx}"
        field_name = "mean_curvature_sign" if lower else "boundary_mass_sign"
        want = Sign.NEGATIVE if lower else Sign.POSITIVE
        ok, missing, _ = _need(geo, (field_name, want))
    else:
        lower = gamma <= 2.0
        rule = "table4.row2" if lower else "table4.row3"
        first = ("mean_curvature_sign", Sign.NEGATIVE) if lower else ("boundary_mass_sign", Sign.POSITIVE)
        ok, missing, violated = _need(geo, first, ("robin_mass_sign", Sign.POSITIVE))
        if violated:
            missing = []
    if ok:
        return _verdict(Attained.YES, rule)
    if missing:
        return _verdict(Attained.UNKNOWN, rule, missing)
    return _verdict(Attained.UNKNOWN, "boundary.sufficient-only")


# cones ---------------------------------------------------------------------

def cone_verdict(
    n: int,
    gamma: float,
    s: float,
    cone: DomainKind,
    contains_full_space: bool = False,
    gamma_h: Optional[float] = None,
) -> Verdict:
    """Attainment on cones, the half-space and the whole space.

    ``gamma_h`` is the Hardy constant of a general cone when known; the
    half-space and whole-space values are built in.
    """
    cone = DomainKind(cone)
    if cone not in (DomainKind.CONE, DomainKind.HALF_SPACE, DomainKind.WHOLE_SPACE):
        raise OutOfRange("cone_verdict needs Cone, HalfSpace or WholeSpace")
    params = ProblemParams(n, gamma, s, Location.BOUNDARY)  # validates n, s, gamma < n^2/4
    if not s < 2.0:
        raise OutOfRange("s must be below 2")
    if cone is DomainKind.HALF_SPACE:
        limit = n * n / 4.0
    elif cone is DomainKind.WHOLE_SPACE:
        limit = (n - 2) ** 2 / 4.0
    else:
        limit = gamma_h
    if limit is not None and gamma >= limit:
        raise OutOfRange(f"gamma={gamma} must be below the Hardy constant {limit}")
    full = cone is DomainKind.WHOLE_SPACE or (cone is DomainKind.CONE and contains_full_space)
    if full:
        if s > 0.0 or gamma >= 0.0:
            return _verdict(Attained.YES, "cone.full-space-attained")
        return _verdict(Attained.NO, "cone.full-space-not-attained")
    if s > 0.0:
        return _verdict(Attained.YES, "cone.proper-attained")
    if gamma <= 0.0:
        return _verdict(Attained.NO, "cone.proper-not-attained")
    if params.n >= 4:
        return _verdict(Attained.YES, "cone.proper-attained")
    return _verdict(Attained.UNKNOWN, "cone.n3-unsettled")


def hardy_constant_verdict(
    domain_kind,
    location=Location.INTERIOR,
    n: int = 3,
    gamma_h: Optional[float] = None,
    k: Optional[int] = None,
) -> HardyConstantVerdict:
    """Value (or admissible range) of the Hardy constant and whether it is attained.

    For a bounded smooth domain with the singularity on its boundary pass
    ``gamma_h`` to decide attainment; without it only the range is returned.
    ``k`` selects the cone ``R^k_+ x R^(n-k)``.
    """
    from .core import gamma_hardy_cone

    dk = DomainKind(domain_kind)
    loc = Location(location)
    lo, hi = (n - 2) ** 2 / 4.0, n * n / 4.0
    if dk is DomainKind.HALF_SPACE:
        return HardyConstantVerdict(hi, None, Attained.NO, "hardy.halfspace", _cite("hardy.halfspace"))
    if dk is DomainKind.CONE and k is not None:
        v = gamma_hardy_cone(n, k)
        return HardyConstantVerdict(v, None, Attained.NO, "hardy.cone", _cite("hardy.cone"))
    if loc is Location.INTERIOR or dk is DomainKind.WHOLE_SPACE:
        return HardyConstantVerdict(lo, None, Attained.NO, "hardy.interior", _cite("hardy.interior"))
    rule = "hardy.bounded-boundary"
    if gamma_h is None:
        return HardyConstantVerdict(None, (lo, hi), Attained.UNKNOWN, rule, _cite(rule))
    if not lo < gamma_h <= hi:
        raise OutOfRange(f"gamma_h={gamma_h} must lie in ({lo}, {hi}]")
    att = Attained.YES if gamma_h < hi else Attained.UNKNOWN
    return HardyConstantVerdict(gamma_h, (lo, hi), att, rule, _cite(rule))
