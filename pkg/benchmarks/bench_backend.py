"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the raw per-iteration sweep, a full weighted-center solve, and a
small strong-converse curve under each available backend.

Usage: python benchmarks/bench_backend.py   (after `python setup.py
build_ext --inplace`, otherwise only the python backend is reported)
"""

import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from renyicq import backend  # noqa: E402
from renyicq.centers import solve_center_D  # noqa: E402
from renyicq.channels import random_cq_channel  # noqa: E402
from renyicq.divergences import RenyiParams  # noqa: E402
from renyicq.exponents import RadiusCache, sc_curve  # noqa: E402


def time_call(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def sweep_problem(rng, k, m):
    g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    sigma = g @ g.conj().T
    sigma /= np.trace(sigma).real
    wp = np.stack([
        (lambda h: h @ h.conj().T)(
            rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k)))
        for _ in range(m)
    ])
    probs = rng.dirichlet(np.ones(m))
    return sigma, wp, probs


def main():
    names = backend.available_backends()
    print(f"available backends: {', '.join(names)}")
    rng = np.random.default_rng(0)

    rows = []
    for k in (2, 4, 8, 16):
        sigma, wp, probs = sweep_problem(rng, k, 4)
        entry = {"case": f"center_sweep d={k} (x1000)"}
        for name in names:
            with backend.temporarily(name):
                entry[name] = time_call(lambda: [
                    backend.center_sweep(sigma, wp, probs, 2.0, -0.25)
                    for _ in range(1000)
                ])
        rows.append(entry)

    for dim, syms in ((2, 3), (4, 4)):
        w, p = random_cq_channel(dim, syms, np.random.default_rng(7))
        params = RenyiParams(2.0, 2.0)
        entry = {"case": f"solve_center_D d={dim} k={syms}"}
        for name in names:
            with backend.temporarily(name):
                entry[name] = time_call(lambda: solve_center_D(w, p, params), repeat=3)
        rows.append(entry)

    w, p = random_cq_channel(2, 3, np.random.default_rng(11))
    rates = np.linspace(0.2, 1.2, 10)
    entry = {"case": "sc_curve 10 rates d=2"}
    for name in names:
        with backend.temporarily(name):
            entry[name] = time_call(
                lambda: sc_curve(w, p, rates, cache=RadiusCache(w, p)), repeat=1)
    rows.append(entry)

    width = max(len(r["case"]) for r in rows) + 2
    header = "case".ljust(width) + "".join(n.rjust(14) for n in names)
    if len(names) == 2:
        header += "  speedup"
    print(header)
    for r in rows:
        line = r["case"].ljust(width)
        for n in names:
            line += f"{r[n] * 1e3:11.2f} ms"
        if len(names) == 2:
            line += f"  {r['python'] / r['compiled']:6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
