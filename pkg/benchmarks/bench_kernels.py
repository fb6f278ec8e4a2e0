"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends get identical inputs; the script checks the outputs match
before reporting timings.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gibbsanneal.kernels import load_backend
from gibbsanneal.models import Graph


def _cases(rng):
    g = Graph.cycle(12)
    indptr, nbr, eid = g.csr
    eu, ev = g.endpoints
    chains, steps = 200, 200

    def spin(mod):
        spins = np.full((chains, g.n), -1, dtype=np.int8)
        mod.spin_glauber(indptr, nbr, eid, np.full(g.m, np.log(0.5)), np.zeros(g.m), np.zeros(g.n), spins, u_spin)
        return spins

    def matching(mod):
        state = np.zeros((chains, g.m), dtype=np.int8)
        mod.matching_glauber(eu, ev, 0.5, state, u_spin, np.zeros(g.n, dtype=np.int64))
        return state

    def rc(mod):
        state = np.zeros(g.m, dtype=np.int8)
        mod.rc_glauber(
            indptr, nbr, eid, eu, ev, np.arange(g.m, dtype=np.int64), np.full(g.m, 0.5),
            np.full(g.n, np.log(0.3)), state, u_rc, np.zeros(g.n, dtype=np.int64), np.zeros(g.n, dtype=np.int64),
        )
        return state

    def weights(mod):
        out = np.empty(1 << g.m)
        mod.rc_log_weights(
            g.n, eu, ev, np.full(g.m, np.log(0.5)), np.full(g.m, np.log(0.5)), np.full(g.n, np.log(0.3)),
            out, np.zeros(g.n, dtype=np.int64), np.zeros(g.n),
        )
        return out

    u_spin = rng.random((chains, steps))
    u_rc = rng.random(20_000)
    return {
        "spin_glauber (200 chains x 200 steps)": spin,
        "matching_glauber (200 chains x 200 steps)": matching,
        "rc_glauber (20000 steps)": rc,
        "rc_log_weights (2^12 subsets)": weights,
    }


def _time(fn, mod, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(mod)
        best = min(best, time.perf_counter() - t)
    return best, out


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    py = load_backend("python")
    try:
        cy = load_backend("cython")
    except ImportError:
        print("compiled extension not built; only the Python backend is available")
        return
    print(f"{'kernel':45s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in _cases(np.random.default_rng(0)).items():
        t_py, out_py = _time(fn, py, args.repeat)
        t_cy, out_cy = _time(fn, cy, args.repeat)
        if not np.array_equal(out_py, out_cy):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:45s} {t_py:9.4f}s {t_cy:9.4f}s {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
