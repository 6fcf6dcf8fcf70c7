"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--f-drive 1e9] [--dim 50] [--repeat 3]

Reports wall time per call and the largest difference between backends.
"""
import argparse
import time

import numpy as np

from cpbfridge import kernels, otto


def _best(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def bench_bloch(f_drive, repeat):
    cfg = otto.OttoConfig.device_defaults(f_drive)
    init = np.array([0.0, 0.0, -1.0])
    rows = []
    for name in ("compiled", "python"):
        t, cyc = _best(lambda: otto.integrate_cycle(init, cfg, backend=name), repeat)
        rows.append((name, t, cyc))
    diff = float(np.max(np.abs(rows[0][2].end_state - rows[1][2].end_state)))
    return rows, diff, rows[0][2].n_steps


def bench_jacobi(dim, repeat, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = np.ascontiguousarray(a + a.conj().T)
    rows = []
    for name in ("compiled", "python"):
        kern = kernels.get_backend(name)
        t, out = _best(lambda: kern.jacobi_eigh(m, 1e-12, 100), repeat)
        rows.append((name, t, np.sort(np.asarray(out[0]))))
    return rows, float(np.max(np.abs(rows[0][2] - rows[1][2])))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--f-drive", type=float, default=1e9)
    ap.add_argument("--dim", type=int, default=50)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        kernels.get_backend("compiled")
    except ImportError:
        print("compiled backend not built; nothing to compare")
        return 1

    rows, diff, n = bench_bloch(args.f_drive, args.repeat)
    print(f"Bloch RK4 cycle at f_drive={args.f_drive:.3g} Hz ({n} steps)")
    for name, t, _ in rows:
        print(f"  {name:9s} {t * 1e3:10.2f} ms")
    print(f"  speedup {rows[1][1] / rows[0][1]:8.1f}x   max |state difference| {diff:.2e}")

    rows, diff = bench_jacobi(args.dim, args.repeat)
    print(f"Jacobi eigensolver, {args.dim}x{args.dim} complex Hermitian")
    for name, t, _ in rows:
        print(f"  {name:9s} {t * 1e3:10.2f} ms")
    print(f"  speedup {rows[1][1] / rows[0][1]:8.1f}x   max |eigenvalue difference| {diff:.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
