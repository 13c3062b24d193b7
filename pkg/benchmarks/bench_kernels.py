"""Compare the compiled continuant kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import importlib
import random
import timeit

from qhpp.hj import _pykernels


def cases():
    rng = random.Random(0)
    short = [[rng.randint(2, 6) for _ in range(rng.randint(1, 9))] for _ in range(2000)]
    long = [[rng.randint(2, 9) for _ in range(60)] for _ in range(200)]
    return {
        "continuant x2000 (l <= 9)": lambda k: [k.continuant(w) for w in short],
        "chain_numbers x2000 (l <= 9)": lambda k: [k.chain_numbers(w) for w in short],
        "prefix_suffix x2000 (l <= 9)": lambda k: [k.prefix_suffix(w) for w in short],
        "continuant x200 (l = 60, bigint)": lambda k: [k.continuant(w) for w in long],
        "identity_sweep(7, 5)": lambda k: k.identity_sweep(7, 5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    try:
        compiled = importlib.import_module("qhpp.hj._ckernels")
    except ImportError:
        compiled = None
        print("compiled kernels not built; timing the fallback only")

    print(f"{'case':36} {'python ms':>10} {'compiled ms':>12} {'speed-up':>9}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:36} {py:10.2f} {'-':>12} {'-':>9}")
            continue
        assert fn(compiled) == fn(_pykernels), name
        c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:36} {py:10.2f} {c:12.2f} {py / c:8.1f}x")


if __name__ == "__main__":
    main()
