"""Benchmark the hot kernels: numba-jitted vs pure-numpy reference.

Both implementations are compiled from the same source (see
majorasim.backend), so this compares the dispatched kernel against the
plain-Python/numpy path in one process and verifies they agree numerically.

    python3 benchmarks/bench_kernels.py [--steps 400] [--repeat 3]

Run with MAJORASIM_BACKEND=numpy to time the fallback against itself (the
table then shows a ratio of ~1).
"""

from __future__ import annotations

import argparse
import time

import numpy as np
from threadpoolctl import threadpool_limits

from majorasim.backend import backend_name
from majorasim.kernels import RAMP_SMOOTH, _rk4_kernel, _rk4_propagate_numpy
from majorasim.pfaffian import _pfaffian_kernel, _pfaffian_ltl


def _antisym(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    return np.ascontiguousarray((a - a.T) / 2.0)


def _time(fn, repeat: int) -> float:
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_rk4(dim: int, steps: int, repeat: int) -> tuple[float, float, float]:
    a0, ac, asn = _antisym(dim, 0), _antisym(dim, 1), _antisym(dim, 2)

    def run(kernel):
        o = np.eye(dim)
        kernel(o, a0, ac, asn, RAMP_SMOOTH, 1.0, 0.0, 1.0, steps)
        return o

    run(_rk4_kernel)  # jit warmup
    t_fast = _time(lambda: run(_rk4_kernel), repeat)
    t_ref = _time(lambda: run(_rk4_propagate_numpy), repeat)
    dev = float(np.max(np.abs(run(_rk4_kernel) - run(_rk4_propagate_numpy))))
    return t_fast / steps, t_ref / steps, dev


def bench_pfaffian(dim: int, repeat: int) -> tuple[float, float, float]:
    m = _antisym(dim, 3)
    _pfaffian_kernel(m.copy())  # jit warmup
    t_fast = _time(lambda: _pfaffian_kernel(m.copy()), repeat)
    t_ref = _time(lambda: _pfaffian_ltl(m.copy()), repeat)
    dev = abs(_pfaffian_kernel(m.copy()) - _pfaffian_ltl(m.copy()))
    rel = dev / max(abs(_pfaffian_ltl(m.copy())), 1e-300)
    return t_fast, t_ref, rel


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=400, help="RK4 steps per timing")
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    args = parser.parse_args()

    print(f"dispatched backend: {backend_name()}")
    print(f"{'kernel':<18}{'dim':>6}{'dispatched':>14}{'numpy ref':>14}{'ratio':>8}{'max dev':>12}")
    with threadpool_limits(limits=1):
        for dim in (40, 160, 240):
            fast, ref, dev = bench_rk4(dim, args.steps, args.repeat)
            print(
                f"{'rk4_propagate':<18}{dim:>6}{fast * 1e3:>11.3f} ms{ref * 1e3:>11.3f} ms"
                f"{ref / fast:>8.2f}{dev:>12.2e}"
            )
        for dim in (40, 160, 240):
            fast, ref, dev = bench_pfaffian(dim, args.repeat)
            print(
                f"{'pfaffian':<18}{dim:>6}{fast * 1e3:>11.3f} ms{ref * 1e3:>11.3f} ms"
                f"{ref / fast:>8.2f}{dev:>12.2e}"
            )
    print("(rk4 times per step; pfaffian per call; dev = |dispatched - reference|)")


if __name__ == "__main__":
    main()
