"""Index of result anchors cited by CLI records.

Every ``citations`` entry of a result record is a key of :data:`ANCHORS`.
The README reproduces this index; a test keeps the two in sync.
"""

from .verdicts import RULES

_RESULTS = {
    "constant.sobolev": "Sharp Sobolev constant (gamma = s = 0), attained by the Aubin-Talenti bubble.",
    "constant.hardy-sobolev": "Hardy-Sobolev constant (gamma = 0, 0 < s < 2), attained by explicit profiles.",
    "constant.hardy": "Hardy constant (gamma = 0, s = 2): equals (n-2)^2/4.",
    "constant.gamma-s": "Best constant with 0 <= gamma < (n-2)^2/4, 0 < s < 2 (or gamma > 0, s = 0), from the explicit extremal.",
    "exponents.beta": "Radial kernel exponents of -Delta - gamma/|x|^2: beta_+ + beta_- = n-2, beta_+ beta_- = gamma.",
    "exponents.alpha": "Half-space kernel exponents: alpha_+ + alpha_- = n, alpha_+ alpha_- = gamma.",
    "exponents.critical-dimension": "Critical dimensions: gap beta_+ - beta_- equals 2 at n_gamma, alpha_+ - alpha_- equals 1 at the boundary threshold.",
    "ckn.map": "Correspondence between Caffarelli-Kohn-Nirenberg parameters (a, b) and (gamma, s).",
    "extremal.explicit": "Explicit whole-space extremal r^-beta_- (1 + r^((2-s)(beta_+ - beta_-)/(n-2)))^(-(n-2)/(2-s)).",
    "hi.ode-criterion": "P is an HI-potential on (0, R) iff y'' + y'/r + P y = 0, y(0) = 1, has no zero in (0, R).",
    "hi.bessel-zero": "For P = 1 the first zero is the first root of the Bessel function J_0.",
    "hi.catalog": "Catalog: log-squared and iterated-log potentials are HI; c r^-2 is never HI.",
    "mass.interior": "Interior mass m_{gamma,a}: ratio c2/c1 in H = c1 r^-beta_+ + c2 r^-beta_- + o(r^-beta_-).",
    "mass.monotone": "The interior mass of L_gamma - lambda is strictly increasing and continuous in lambda.",
    "eigen.lambda-1": "First Dirichlet eigenvalue lambda_1 of L_gamma on the ball.",
    "eigen.lambda-star": "Weighted eigenvalue lambda* governing attainment on the ball; equals the mass zero lambda_0.",
    "minimize.subcritical": "Subcritical minimization (p = 2*(s) - eps) on the ball with extrapolation eps -> 0.",
    "minimize.compactness-gap": "Strict inequality with the whole-space constant restores compactness of minimizing sequences.",
    "verify.acceptance": "Acceptance suite of numerical and decision checks.",
}

ANCHORS: dict[str, str] = {**_RESULTS, **RULES}


def anchor_table_markdown() -> str:
    """Markdown table of all anchors, sorted by id."""
    lines = ["| anchor | statement |", "| --- | --- |"]
    for key in sorted(ANCHORS):
        lines.append(f"| `{key}` | {ANCHORS[key]} |")
    return "\n".join(lines) + "\n"
