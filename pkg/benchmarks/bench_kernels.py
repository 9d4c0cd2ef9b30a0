"""Compare the compiled and NumPy reduction kernels.

Times the quadratic-form kernel on the shapes produced by the one- and
two-system models (20 and 40 dimensional total spaces), and the full
``evolve_rotated`` call with each backend.

    python benchmarks/bench_kernels.py [--steps 500] [--repeat 20]
"""

import argparse
import math
import timeit
import warnings

import numpy as np

from ptoqs import dynamics, kernels
from ptoqs.dynamics import BathSpec, build_single_pt_model, build_two_pt_model, time_grid
from ptoqs.pt import PTParams


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _kernel_case(n_sys, n, steps, rng):
    p = n_sys * (n_sys + 1) // 2 + 1  # upper-triangle elements plus the top-level form
    forms = rng.normal(size=(p, n, n)) + 1j * rng.normal(size=(p, n, n))
    phases = np.exp(-1j * np.outer(np.linspace(0, 25, steps), rng.normal(size=n)))
    return np.ascontiguousarray(forms), np.ascontiguousarray(phases)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if kernels.compiled_quadratic_forms is None:
        print("compiled extension not built; only the NumPy backend is available")
    backends = {"python": kernels.python_quadratic_forms}
    if kernels.compiled_quadratic_forms is not None:
        backends["compiled"] = kernels.compiled_quadratic_forms

    rng = np.random.default_rng(0)
    print(f"kernel only, {args.steps} time points (best of {args.repeat}, ms)")
    for label, n_sys, n in (("one system, n=20", 2, 20), ("two systems, n=40", 4, 40)):
        forms, phases = _kernel_case(n_sys, n, args.steps, rng)
        times = {name: _best(lambda f=f: f(forms, phases), args.repeat) for name, f in backends.items()}
        print(f"  {label:<20}" + "".join(f"  {k} {v * 1e3:8.3f}" for k, v in times.items()))

    p = PTParams(0.1, 0.4, math.pi / 6)
    grid = time_grid(25.0, args.steps)
    models = (("one system", build_single_pt_model(p, BathSpec(), 0.5)),
              ("two systems", build_two_pt_model(p, BathSpec(), 0.05, 1.0)))
    print(f"evolve_rotated, {args.steps} time points (best of {args.repeat}, ms)")
    saved = kernels.quadratic_forms
    try:
        for label, model in models:
            rho0 = model.excited_state()
            row = {}
            for name, f in backends.items():
                kernels.quadratic_forms = f
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore")
                    row[name] = _best(lambda: dynamics.evolve_rotated(model, rho0, grid), args.repeat)
            print(f"  {label:<20}" + "".join(f"  {k} {v * 1e3:8.3f}" for k, v in row.items()))
    finally:
        kernels.quadratic_forms = saved


if __name__ == "__main__":
    main()
