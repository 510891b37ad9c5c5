"""Benchmark the jitted integration kernels against the pure-Python fallback.

The package keeps both paths importable at once: `kernels._integrate` is the
jitted entry point (when numba is available and EIGENBOUND_NO_NUMBA is not
set) and `kernels._integrate_impl` is the identical function executed by the
plain interpreter.  The workload below mirrors what the eigenvalue solver
actually does — scan a window of trial eigenvalues and integrate the shooting
system once per trial — so the reported speedup is the one the oracle sees.

Run:  python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]

For an end-to-end comparison through the public API instead, time any CLI
command twice, the second time with EIGENBOUND_NO_NUMBA=1.
"""

import argparse
import math
import time

import numpy as np

from eigenbound import kernels

# (kind, c1, c2): flat, tanh drift, tan drift — the three shooting families
# the reduced problems use.
FAMILIES = (
    (0, 0.0, 0.0, "flat"),
    (1, 6.0, 1.5, "tanh drift"),
    (2, -3.0, 1.2, "tan drift"),
)


def scan(integrate, lams) -> float:
    checksum = 0.0
    for kind, c1, c2, _ in FAMILIES:
        for lam in lams:
            f, g, log_scale, _h, status, _steps = integrate(
                kind, c1, c2, float(lam), 0.0, 1.0, 0.0, 1.0, 0.0,
                1e-11, 1e-11, 2_000_000,
            )
            assert status == kernels.STATUS_OK
            checksum += f + g + log_scale
    return checksum


def best_time(integrate, lams, repeat) -> tuple[float, float]:
    checksum = scan(integrate, lams)  # warm the path before timing
    timings = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        value = scan(integrate, lams)
        timings.append(time.perf_counter() - t0)
        assert value == checksum
    return min(timings), checksum


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200,
                    help="trial eigenvalues per family (default 200)")
    ap.add_argument("--repeat", type=int, default=5,
                    help="timed repetitions, best-of (default 5)")
    args = ap.parse_args()

    lams = np.linspace(0.5, 40.0, args.trials)
    work = args.trials * len(FAMILIES)

    if kernels.NUMBA_ENABLED:
        kernels.warmup()
        jit_time, jit_sum = best_time(kernels._integrate, lams, args.repeat)
    else:
        jit_time = jit_sum = None
        print("note: jit path unavailable in this process"
              " (numba missing or EIGENBOUND_NO_NUMBA set)")

    plain_time, plain_sum = best_time(
        kernels._integrate_impl, lams, args.repeat
    )

    print(f"workload: {work} shooting integrations"
          f" ({len(FAMILIES)} families x {args.trials} trial eigenvalues)")
    print(f"pure python : {plain_time:8.3f} s"
          f"  ({1e3 * plain_time / work:7.3f} ms/integration)")
    if jit_time is not None:
        print(f"numba jit   : {jit_time:8.3f} s"
              f"  ({1e3 * jit_time / work:7.3f} ms/integration)")
        print(f"speedup     : {plain_time / jit_time:8.1f}x")
        drift = abs(jit_sum - plain_sum) / max(1.0, abs(plain_sum))
        agree = drift < 1e-12
        print(f"agreement   : {'PASS' if agree else 'FAIL'}"
              f" (relative checksum drift {drift:.2e})")
        return 0 if agree else 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
