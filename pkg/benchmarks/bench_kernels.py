"""Compare the compiled and pure-Python ODE kernels.

Two workloads are timed: raw calls to ``integrate_linear`` and the
end-to-end solvers (first eigenvalue bracket plus a mass sweep), the
latter in fresh interpreters so that backend selection at import applies.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json]
"""
from __future__ import annotations

import argparse
import json
import math
import os
import subprocess
import sys
import timeit

import numpy as np

from hardy_ckn import _pykernels

try:
    from hardy_ckn import _ckernels
except ImportError:
    _ckernels = None

SOLVER_SNIPPET = """
import time
from hardy_ckn.ode import lambda_1_ball, interior_mass_ball
t = time.perf_counter()
lambda_1_ball(5, 1.0)
for lam in [0.5 * i for i in range(19)]:
    interior_mass_ball(5, 2.0, lam)
print(time.perf_counter() - t)
"""


def kernel_call(mod):
    t_out = np.linspace(math.log(1e-6), 0.0, 64)
    return lambda: mod.integrate_linear(1.0, 0.0, 9.0, 2.0, t_out[0], 1.0, 0.0, t_out,
                                        1e-11, 1e-14, 0.25, quad=True, g=1.0, q0=0.0)


def time_kernel(mod, repeat):
    return min(timeit.repeat(kernel_call(mod), number=20, repeat=repeat)) / 20


def time_solvers(pure: bool, repeat: int) -> float:
    env = dict(os.environ, HARDY_CKN_PURE_PYTHON="1" if pure else "0")
    runs = []
    for _ in range(repeat):
        out = subprocess.run([sys.executable, "-c", SOLVER_SNIPPET], env=env,
                             capture_output=True, text=True, check=True)
        runs.append(float(out.stdout))
    return min(runs)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--json", action="store_true")
    args = p.parse_args(argv)

    res = {"python": {"kernel_s": time_kernel(_pykernels, args.repeat),
                      "solvers_s": time_solvers(True, args.repeat)}}
    if _ckernels is not None:
        res["cython"] = {"kernel_s": time_kernel(_ckernels, args.repeat),
                         "solvers_s": time_solvers(False, args.repeat)}
        res["speedup"] = {k: res["python"][k] / res["cython"][k] for k in res["python"]}

    if args.json:
        print(json.dumps(res, indent=2, sort_keys=True))
        return
    for backend in ("python", "cython"):
        if backend in res:
            r = res[backend]
            print(f"{backend:7s} kernel {r['kernel_s'] * 1e3:9.3f} ms   solvers {r['solvers_s']:8.3f} s")
    if "speedup" in res:
        print(f"speedup kernel x{res['speedup']['kernel_s']:.1f}   solvers x{res['speedup']['solvers_s']:.1f}")
    else:
        print("compiled kernel not available")


if __name__ == "__main__":
    main()
