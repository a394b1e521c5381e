"""Time grid evaluation under the numba and numpy backends.

Each backend runs in its own interpreter because the choice is fixed at
import time by SCATKERNELS_BACKEND.

    python benchmarks/bench_backends.py [--size 200] [--n 128] [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from scatkernels import _backend
from scatkernels.kernelgrid import eval_grid
from scatkernels.phasefn import multimodal_example

size, n, repeat = map(int, sys.argv[1:4])
p = multimodal_example()
eval_grid(p, 0, 4, 4, n_uniform=n)
out = {"backend": _backend.BACKEND}
for m in (0, 7):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        grid = eval_grid(p, m, size, size, n_uniform=n)
        times.append(time.perf_counter() - start)
    out[f"m{m}"] = min(times)
    out[f"checksum_m{m}"] = float(np.sum(grid.values))
print(json.dumps(out))
"""


def run(backend, size, n, repeat):
    env = dict(os.environ, SCATKERNELS_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(size), str(n), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", type=int, default=200)
    parser.add_argument("--n", type=int, default=128)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    results = [run(b, args.size, args.n, args.repeat) for b in ("numba", "numpy")]
    print(f"multimodal phase function, {args.size}x{args.size} grid, N = {args.n}, best of {args.repeat}")
    print("backend,m0_seconds,m7_seconds,checksum_m0,checksum_m7")
    for r in results:
        print(f"{r['backend']},{r['m0']:.4f},{r['m7']:.4f},{r['checksum_m0']!r},{r['checksum_m7']!r}")


if __name__ == "__main__":
    main()
