"""Compiled vs pure-numpy RK4 kernel on a 16x16 Lindblad generator.

    python benchmarks/bench_rk4.py [--steps N] [--repeat R]
"""
import argparse
import timeit

import numpy as np

from iqdyn import _rk4_py
from iqdyn.channels import ChannelKind, channel_rates
from iqdyn.oracle import build_generator
from iqdyn.states import BellPopulations, SpatialConfig, populations_to_pseudospin

try:
    from iqdyn import _rk4
except ImportError:
    _rk4 = None


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--steps", type=int, default=5000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    config = SpatialConfig.from_l(0.8, 0.4)
    gen = build_generator(ChannelKind.DEPOLARIZING,
                          channel_rates(ChannelKind.DEPOLARIZING, config, 1.0, 0.0)).matrix
    gen = np.ascontiguousarray(gen, dtype=np.complex128)
    y0 = np.ascontiguousarray(
        populations_to_pseudospin(BellPopulations.pure("1m")).matrix.reshape(-1))
    h = 1e-3

    kernels = {"python": _rk4_py.rk4_steps}
    if _rk4 is not None:
        kernels["compiled"] = _rk4.rk4_steps
    else:
        print("compiled extension not built; timing the Python kernel only")

    results = {}
    for name, fn in kernels.items():
        best = min(timeit.repeat(lambda: fn(gen, y0, h, args.steps), number=1, repeat=args.repeat))
        results[name] = best
        print(f"{name:>9}: {best * 1e3:9.2f} ms for {args.steps} steps "
              f"({best / args.steps * 1e6:.2f} us/step)")
    if len(results) == 2:
        diff = np.max(np.abs(kernels["python"](gen, y0, h, args.steps)
                             - kernels["compiled"](gen, y0, h, args.steps)))
        print(f"  speedup: {results['python'] / results['compiled']:.1f}x, max |diff| = {diff:.2e}")


if __name__ == "__main__":
    main()
