"""Compare the compiled and numpy statevector kernels.

    python3 benchmarks/bench_kernels.py [--n 12] [--steps 2000] [--repeat 3]

Times a full annealing-style run (``steps`` phase + mixer layers) and a single
mixer sweep on each available backend, then checks the backends agree.
"""

import argparse
import time

import numpy as np

from skqaoa import kernels
from skqaoa.sk import cost_values, sample_instance
from skqaoa.statevector import plus_state


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    costs = cost_values(sample_instance(args.n, 0))
    rng = np.random.default_rng(0)
    phases = rng.uniform(0, 0.01, args.steps + 1)
    mixers = rng.uniform(0, 0.01, args.steps)

    finals = {}
    print(f"n={args.n}, steps={args.steps}, best of {args.repeat}")
    print(f"{'backend':>8} {'layers [s]':>11} {'per step [us]':>14} {'mixer [us]':>11}")
    for name in kernels.available_backends():
        be = kernels.get_backend(name)
        state = plus_state(args.n)

        def run():
            psi = plus_state(args.n)
            be.apply_layers(psi, costs, args.n, phases, mixers)
            finals[name] = psi

        t_layers = best_time(run, args.repeat)
        t_mixer = best_time(lambda: be.apply_mixer(state, args.n, 0.1), max(args.repeat, 20))
        print(f"{name:>8} {t_layers:11.4f} {1e6 * t_layers / args.steps:14.2f} {1e6 * t_mixer:11.2f}")

    if len(finals) == 2:
        diff = np.max(np.abs(finals["cython"] - finals["numpy"]))
        print(f"max |psi_cython - psi_numpy| = {diff:.2e}")


if __name__ == "__main__":
    main()
