"""Compare the numba and numpy enumeration backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--threads 1]

Each case runs once untimed (JIT warm-up), then ``--repeat`` times; the
best wall time is reported. Results from both backends are compared for
equality before timing is printed.
"""

import argparse
import time

from frobcone import _kernels, corpus
from frobcone.hk import frobenius_power_length
from frobcone.toric import frobenius_decompose


def cases():
    conifold = corpus.load_ring("conifold")
    veronese3 = corpus.load_ring("veronese3")
    orthant3 = corpus.load_ring("orthant3")
    yield "decompose conifold e=6", lambda b, t: frobenius_decompose(conifold, None, 6, backend=b, threads=t).signature_counts
    yield "decompose veronese3 e=10", lambda b, t: frobenius_decompose(veronese3, None, 10, backend=b, threads=t).signature_counts
    yield "decompose orthant3 e=7", lambda b, t: frobenius_decompose(orthant3, None, 7, backend=b, threads=t).signature_counts
    cmax = corpus.load_ideal("conifold.max")
    yield "hk length conifold e=5", lambda b, t: frobenius_power_length(conifold, cmax, 5, backend=b, threads=t).length
    vmax = corpus.load_ideal("veronese3.max")
    yield "hk length veronese3 e=9", lambda b, t: frobenius_power_length(veronese3, vmax, 9, backend=b, threads=t).length


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, run in cases():
        outputs = {b: run(b, args.threads) for b in backends}  # warm-up and agreement check
        ref = outputs["numpy"]
        assert all(o == ref for o in outputs.values()), f"backends disagree on {name}"
        times = {b: best_time(lambda: run(b, args.threads), args.repeat) for b in backends}
        speed = times["numpy"] / times["numba"] if "numba" in times else float("nan")
        print(f"{name:28s}" + "".join(f"{times[b]:11.4f}s" for b in backends) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
