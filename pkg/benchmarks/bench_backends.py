"""Compare the pure-Python and compiled product kernels.

Two workloads: the real Koasati word-form products (sparse, attribute-heavy
labels) and seeded random dense machines.  Labels are arbitrary-precision
bitsets either way, so the compiled kernel only accelerates the pair
bookkeeping — expect a solid but not dramatic ratio.

Usage: python3 benchmarks/bench_backends.py [repeats]
"""

import random
import statistics
import sys
import time

from redup._product_py import product as py_product

try:
    from redup._product_c import product as c_product
except ImportError:
    sys.exit("compiled kernel not built; run pip install -e . first")

from redup.analyses import (
    load_grammar,
    punctual_aspect_reduplication,
    word_level_constraints,
)
from redup.interpret import intersect_open


def as_raw(fsa):
    return (
        fsa.n,
        fsa.start,
        fsa.finals,
        [(a.src, a.dst, a.label.bits, a.label.pc) for a in fsa.arcs],
    )


def random_raw(rng, n, n_arcs, width):
    arcs = [
        (
            rng.randrange(n),
            rng.randrange(n),
            rng.getrandbits(width) or 1,
            rng.random() < 0.5,
        )
        for _ in range(n_arcs)
    ]
    finals = frozenset(q for q in range(n) if rng.random() < 0.3)
    return n, 0, finals, arcs


def build_workloads():
    cg = load_grammar("koasati")
    stem = cg.compile("tahaspin")
    wl = word_level_constraints()
    first = intersect_open(wl, stem)
    rng = random.Random(99)
    return [
        ("koasati wl x stem", as_raw(wl), as_raw(stem)),
        ("koasati (wl x stem) x morpheme",
         as_raw(first), as_raw(punctual_aspect_reduplication())),
        ("random dense 40x40, 134-bit labels",
         random_raw(rng, 40, 300, 134), random_raw(rng, 40, 300, 134)),
        ("random dense 60x60, 24-bit labels",
         random_raw(rng, 60, 500, 24), random_raw(rng, 60, 500, 24)),
    ]


def best_of(fn, a, b, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*a, *b)
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 20
    print(f"{'workload':40} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, a, b in build_workloads():
        sanity_py = py_product(*a, *b)
        sanity_c = c_product(*a, *b)
        assert sanity_py[0] == sanity_c[0] and sanity_py[4] == sanity_c[4]
        py_best, _ = best_of(py_product, a, b, repeats)
        c_best, _ = best_of(c_product, a, b, repeats)
        print(
            f"{name:40} {py_best * 1e3:9.3f}ms {c_best * 1e3:9.3f}ms "
            f"{py_best / c_best:7.2f}x"
        )


if __name__ == "__main__":
    main()
