"""Compare the numba and pure-numpy kernel paths.

    python benchmarks/bench_kernels.py [--repeat 5] [--restarts 32]

Kernels are timed directly (``*_nb`` against ``*_np``) after a warm-up call
so that JIT compilation is excluded. The end-to-end optimizer run on the
tiles state is timed in two fresh subprocesses, one with
``ENTB_DISABLE_NUMBA=1``. Compiled kernels are cached on disk, so only the
very first numba run pays the compile cost (several seconds).
"""
from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from entbound import kernels
from entbound.qstate import make_family, random_ginibre

OPT_SNIPPET = """
import time
from entbound.optimizer import OptimizerConfig, optimize_loos
from entbound.qstate import make_family
rho = make_family("tiles_upb")
t0 = time.perf_counter()
res = optimize_loos(rho, OptimizerConfig(restarts={restarts}))
print(f"{{time.perf_counter() - t0:.3f}} {{res.bound:.6f}}")
"""


def bench(label, fn_nb, fn_np, args, number, repeat):
    out_nb, out_np = fn_nb(*args), fn_np(*args)
    diff = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) for a, b in zip(_tup(out_nb), _tup(out_np)))
    t_nb = min(timeit.repeat(lambda: fn_nb(*args), number=number, repeat=repeat)) / number
    t_np = min(timeit.repeat(lambda: fn_np(*args), number=number, repeat=repeat)) / number
    print(f"{label:<32} {t_nb * 1e6:>11.1f} {t_np * 1e6:>11.1f} {t_np / t_nb:>8.2f}x {diff:>9.1e}")


def _tup(x):
    return x if isinstance(x, tuple) else (x,)


def kicks(rng, steps, dim):
    g = rng.normal(size=(steps, dim, dim))
    k = g - g.transpose(0, 2, 1)
    return k * (np.sqrt(2.0) / np.sqrt(np.sum(k * k, axis=(1, 2))))[:, None, None]


def run_optimizer(disable: bool, restarts: int) -> tuple[float, float]:
    env = dict(os.environ, ENTB_DISABLE_NUMBA="1" if disable else "0")
    proc = subprocess.run(
        [sys.executable, "-c", OPT_SNIPPET.format(restarts=restarts)],
        env=env, capture_output=True, text=True, check=True,
    )
    secs, bound = proc.stdout.split()
    return float(secs), float(bound)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--restarts", type=int, default=32)
    ap.add_argument("--skip-optimizer", action="store_true")
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)

    print(f"{'kernel':<32} {'numba (us)':>11} {'numpy (us)':>11} {'speedup':>9} {'max diff':>9}")
    for dims in ((2, 2), (3, 3), (4, 4), (8, 8), (12, 12)):
        m, n = dims
        mat = np.ascontiguousarray(random_ginibre(dims, rng).mat)
        bench(f"partial_transpose {m}x{n}", kernels.partial_transpose_nb, kernels.partial_transpose_np, (mat, m, n), 2000, args.repeat)
        bench(f"realign {m}x{n}", kernels.realign_nb, kernels.realign_np, (mat, m, n), 2000, args.repeat)

    for d in (4, 9, 16):
        k = 0.3 * kicks(rng, 1, d)[0]
        bench(f"expm_antisym {d}x{d}", kernels.expm_antisym_nb, kernels.expm_antisym_np, (k,), 500, args.repeat)

    tiles = make_family("tiles_upb").mat
    for trials in (50, 200):
        members = rng.normal(size=(trials, 7, 9)) + 1j * rng.normal(size=(trials, 7, 9))
        members *= np.sqrt(np.trace(tiles).real / 7 / 9)
        bench(f"ensemble_concurrence t={trials}", kernels.ensemble_concurrence_nb, kernels.ensemble_concurrence_np, (members, 3, 3), 50, args.repeat)

    d = rng.normal(size=(9, 9))
    climb_args = (d, np.eye(9), np.eye(9), kicks(rng, 500, 9), kicks(rng, 500, 9), 0.3, 0.95, 10)
    bench("hill_climb 9x9, 500 steps", kernels.hill_climb_nb, kernels.hill_climb_np, climb_args, 3, args.repeat)

    if not args.skip_optimizer:
        print()
        print(f"optimize_loos on tiles_upb, {args.restarts} restarts (fresh process, JIT cache warm after first run)")
        for label, disable in (("numba", False), ("numpy", True)):
            secs, bound = run_optimizer(disable, args.restarts)
            print(f"  {label:<6} {secs:8.2f} s   bound {bound:.6f}")


if __name__ == "__main__":
    main()
