"""Benchmark the numba kernels against the pure-numpy fallback.

Run as `python -m ndnoma.bench [--bits B] [--n N] [--repeats R]`. Both
backends consume identical pre-drawn normals, so the reported error counts
double as a cross-backend consistency check.
"""

from __future__ import annotations

import argparse
import time

from . import kernels
from .channel import FadingModel
from .core_stats import stream
from .downlink import derive_downlink_params
from .uplink import derive_uplink_params


def _time_block(fn, repeats):
    # first call pays any JIT cost; report it separately
    t0 = time.perf_counter()
    result = fn(0)
    first = time.perf_counter() - t0
    best = float("inf")
    for r in range(1, repeats + 1):
        t0 = time.perf_counter()
        fn(r)
        best = min(best, time.perf_counter() - t0)
    return result, first, best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bits", type=int, default=20_000)
    parser.add_argument("--n", type=int, default=100)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    fading = FadingModel.from_k_db(10.0)
    up = derive_uplink_params(1.0, 0.01, 10.0, 1.0, args.n)
    down = derive_downlink_params(1.0, 0.5, 10.0, 1.0, args.n)

    cases = {
        "uplink": lambda be, r: kernels.uplink_block_errors(
            up, fading, args.bits, stream(args.seed, 0, r), backend=be),
        "downlink": lambda be, r: kernels.downlink_block_errors(
            down, fading, args.bits, stream(args.seed, 1, r), backend=be),
    }

    backends = []
    for name in ("numba", "numpy"):
        try:
            backends.append((name, kernels.get_backend(name)))
        except ImportError:
            print(f"backend {name} unavailable, skipping")

    print(f"bits={args.bits} n={args.n} repeats={args.repeats} "
          f"(default backend: {kernels.backend_name()})")
    print(f"{'case':<10} {'backend':<8} {'first[s]':>9} {'best[s]':>9} "
          f"{'Mbit/s':>8}  errors")
    rates = {}
    for case, run in cases.items():
        for name, be in backends:
            counts, first, best = _time_block(lambda r: run(be, r), args.repeats)
            rates[(case, name)] = best
            print(f"{case:<10} {name:<8} {first:>9.3f} {best:>9.3f} "
                  f"{args.bits / best / 1e6:>8.2f}  {counts}")
        if all((case, n) in rates for n in ("numba", "numpy")):
            speedup = rates[(case, "numpy")] / rates[(case, "numba")]
            print(f"{case:<10} numba speedup over numpy: {speedup:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
