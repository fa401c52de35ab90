import math
import os
import subprocess
import sys

import numpy as np
import pytest

from hardy_ckn import _kernels, _pykernels

try:
    from hardy_ckn import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernel not built")

CASES = [
    # c, kappa, lam, k, t0, y0, dy0, t_end, quad, g, stop
    (0.0, 0.0, 1.0, 2.0, math.log(1e-6), 1.0, 0.0, math.log(3.0), False, 0.0, True),
    (1.0, 0.0, 9.0, 2.0, math.log(1e-6), 1.0, 0.0, 0.0, False, 0.0, False),
    (1.0, 0.0, -2.0, 2.0, math.log(1e-6), 1.0, 0.0, 0.0, True, 1.0, False),
    (-1.0, 0.0, 2.0, 2.0, math.log(1e-2), 1.0, 0.0, 0.0, False, 0.0, False),
    (0.0, 0.3, 0.0, 0.0, -5.0, 1.0, 0.0, 5.0, False, 0.0, False),
]


def run(mod, case, n_out=50):
    c, kappa, lam, k, t0, y0, dy0, t1, quad, g, stop = case
    t_out = np.linspace(t0, t1, n_out)
    return mod.integrate_linear(c, kappa, lam, k, t0, y0, dy0, t_out, 1e-11, 1e-14, 0.25,
                                quad=quad, g=g, q0=0.0, stop_at_zero=stop)


def test_python_kernel_accuracy_on_exact_solution():
    # y'' + kappa y = 0 has y = cos(sqrt(kappa) (t - t0))
    case = CASES[-1]
    ys, zs, *_rest, status = run(_pykernels, case)
    t = np.linspace(case[4], case[7], 50)
    assert status == 0
    assert np.allclose(ys, np.cos(math.sqrt(0.3) * (t - t[0])), atol=1e-9)


@needs_c
@pytest.mark.parametrize("case", CASES)
def test_backends_agree(case):
    py = run(_pykernels, case)
    cy = run(_ckernels, case)
    for a, b in zip(py[:3], cy[:3]):
        assert np.allclose(a, b, rtol=1e-12, atol=1e-15, equal_nan=True)
    assert py[3] == cy[3]
    assert (math.isnan(py[4]) and math.isnan(cy[4])) or py[4] == pytest.approx(cy[4], abs=1e-14)
    assert py[6] == cy[6]


def test_stop_at_zero_refines_bessel_root():
    case = CASES[0]
    out = run(_pykernels, case)
    assert math.exp(out[4]) == pytest.approx(2.404825557695773, abs=1e-10)
    assert out[3] == 1


def test_nonfinite_status():
    t_out = np.array([0.0, 50.0])
    out = _pykernels.integrate_linear(0.0, 0.0, 1.0, 30.0, 0.0, 1.0, 0.0, t_out, 1e-11, 1e-14, 0.25)
    assert out[6] in (1, 2, 3)


def test_backend_selection():
    assert _kernels.BACKEND in ("cython", "python")
    env = dict(os.environ, HARDY_CKN_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import hardy_ckn; print(hardy_ckn.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_solvers_agree_across_backends():
    code = (
        "from hardy_ckn.ode import lambda_1_ball, interior_mass_ball;"
        "print(repr(lambda_1_ball(5, 1.0).eigenvalue), repr(interior_mass_ball(5, 2.0, 3.0).mass))"
    )
    vals = []
    for flag in ("0", "1"):
        env = dict(os.environ, HARDY_CKN_PURE_PYTHON=flag)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        vals.append([float(x) for x in out.stdout.split()])
    assert vals[0] == pytest.approx(vals[1], rel=1e-10)
