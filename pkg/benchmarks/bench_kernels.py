"""Compare the compiled kernels with the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Kernel timings call both implementations directly on identical inputs.  The
end-to-end row runs the n = 4 filtration computation in a subprocess per
backend, selected through UNITORUS_PURE_PYTHON.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit

from unitorus import _kernels_py
from unitorus.hodge import wedge_table

try:
    from unitorus import _ckernels
except ImportError:
    _ckernels = None

END_TO_END = """
import time
from unitorus.gallery import full_jordan
from unitorus.filtration import build_chain_cyclic, compute_spaces
from unitorus.hodge import HermitianClass
from unitorus.linalg import ExactMatrix
g = full_jordan(4).automorphisms()[0]
t = time.perf_counter()
compute_spaces(build_chain_cyclic(g, HermitianClass(ExactMatrix.identity(4))))
print(time.perf_counter() - t)
"""


def workloads(rng):
    mat = [[rng.randint(-20, 20) for _ in range(24)] for _ in range(24)]
    a = [[rng.randint(-10**6, 10**6) for _ in range(30)] for _ in range(30)]
    table = wedge_table(4, 1, 1, 1, 1)
    vecs = [[rng.randint(-50, 50) for _ in range(16)] for _ in range(4)]
    return {
        "rref_int 24x24": lambda k: k.rref_int(mat, 24),
        "rank_int 24x24": lambda k: k.rank_int(mat, 24),
        "matmul_int 30x30": lambda k: k.matmul_int(a, a),
        "wedge_int (1,1)x(1,1), n=4": lambda k: k.wedge_int(table, *vecs, 36),
    }


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["UNITORUS_PURE_PYTHON"] = "1"
    else:
        env.pop("UNITORUS_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if _ckernels is None:
        print("compiled kernels are not built; only the pure-Python backend is available")
    rng = random.Random(0)
    print(f"{'kernel':32s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in workloads(rng).items():
        tp = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat)) * 1e3
        if _ckernels is not None:
            assert fn(_ckernels) == fn(_kernels_py)
            tc = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:32s} {tp:10.2f} {tc:10.2f} {tp / tc:8.2f}")
        else:
            print(f"{name:32s} {tp:10.2f} {'-':>10s} {'-':>8s}")
    tp = min(end_to_end(True) for _ in range(2)) * 1e3
    tc = min(end_to_end(False) for _ in range(2)) * 1e3
    print(f"{'filtration spaces, n=4':32s} {tp:10.2f} {tc:10.2f} {tp / tc:8.2f}")


if __name__ == "__main__":
    main()
