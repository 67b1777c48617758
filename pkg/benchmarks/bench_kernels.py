"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py --sizes 256 512 1024 --repeat 20
"""

import argparse
import timeit

import numpy as np

from phasefilter import kernels
from phasefilter.grid import make_grid
from phasefilter.states import double_slit_state


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 512, 1024, 2048])
    parser.add_argument("--repeat", type=int, default=10)
    args = parser.parse_args(argv)

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled kernels are not built; only the numpy fallback is timed")
    print(f"{'kernel':<18}{'n':>6}" + "".join(f"{b + ' [ms]':>16}" for b in backends) + f"{'speed-up':>10}  max diff")
    for n in args.sizes:
        g = make_grid(n, 0.0, max(32.0, n / 16.0))
        a = double_slit_state(g, 4.0, 1.0).amp
        b = np.roll(a, 3) * np.exp(0.1j * g.q)
        jobs = {
            "lag_products": lambda be: kernels.lag_products(a, b, backend=be),
            "shifted_products": lambda be: kernels.shifted_products(a, b, n // 2, backend=be),
        }
        for name, job in jobs.items():
            times = {be: _best(lambda be=be: job(be), args.repeat) * 1e3 for be in backends}
            outs = [job(be) for be in backends]
            diff = max(float(np.max(np.abs(o - outs[0]))) for o in outs)
            speed = times["numpy"] / times["compiled"] if "compiled" in times else 1.0
            cols = "".join(f"{times[be]:>16.3f}" for be in backends)
            print(f"{name:<18}{n:>6}{cols}{speed:>9.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
