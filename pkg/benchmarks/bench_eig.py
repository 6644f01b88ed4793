"""Time the compiled and pure-Python eigenvalue kernels on Fock Hamiltonians.

    python benchmarks/bench_eig.py [--sizes 2:8 2:16 3:6 3:8] [--repeat 3]

Each size is N:cutoff; the matrix dimension is (cutoff+1)^N.
"""

import argparse
import time

import numpy as np

from ptchain import linalg
from ptchain.focksolver import build_fock_hamiltonian
from ptchain.hamiltonian import build_chain


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--sizes", nargs="+", default=["2:8", "2:16", "3:6", "3:8"])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = linalg.available_backends()
    print(f"backends: {backends}")
    print(f"{'N:cutoff':>9} {'dim':>5} " + " ".join(f"{b + ' [s]':>14}" for b in backends) + "  speedup  max|diff|")
    for spec in args.sizes:
        n, cutoff = (int(x) for x in spec.split(":"))
        h = build_fock_hamiltonian(build_chain(n, [1.0] * n, 0.3), cutoff).matrix
        times, vals = {}, {}
        for b in backends:
            vals[b] = linalg.eig_dense(h, backend=b).values
            times[b] = best_time(lambda: linalg.eig_dense(h, backend=b), args.repeat)
        row = f"{spec:>9} {h.shape[0]:>5} " + " ".join(f"{times[b]:>14.4f}" for b in backends)
        if len(backends) == 2:
            diff = max(d for _, _, d in linalg.greedy_match(vals["compiled"], vals["python"]))
            row += f"  {times['python'] / times['compiled']:7.1f}  {diff:.1e}"
        print(row)


if __name__ == "__main__":
    main()
