"""Benchmark the compiled kernel core against the pure-Python twin.

Runs the hot kernels on representative workloads and prints a timing
table.  Both implementations compute identical results; the assertion
sweep at the end double-checks that on every workload actually run.

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

from rigidlab import _purecore

try:
    from rigidlab import _fastcore
except ImportError:
    _fastcore = None


def _random_matrix(rng, rows, cols, bound=9):
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def _random_tree(rng, max_nodes):
    parents = [-1]
    labels = [rng.randrange(3)]
    for i in range(1, rng.randint(2, max_nodes)):
        parents.append(rng.randrange(i))
        labels.append(rng.randrange(3))
    return parents, labels


def workloads():
    rng = random.Random(20240913)
    kernel_mats = [_random_matrix(rng, 24, 40) for _ in range(6)]
    lattice_vecs = [[rng.randint(-50, 50) for _ in range(32)] for _ in range(200)]
    snf_mats = [_random_matrix(rng, 10, 12, bound=6) for _ in range(10)]
    chain = [1] * 9
    leq = [1 if (i <= j) else 0 for i in range(3) for j in range(3)]
    tree_pairs = [(_random_tree(rng, 7), _random_tree(rng, 7)) for _ in range(4000)]

    def bench_kernel(mod):
        out = []
        for m in kernel_mats:
            out.append(mod.right_kernel_lattice(m, 40))
        return out

    def bench_lattice(mod):
        lat = mod.IntLattice(32, track=True)
        for v in lattice_vecs:
            lat.add(v)
        hits = 0
        for v in lattice_vecs:
            rem, _ = lat.reduce(v)
            hits += not any(rem)
        return (lat.basis(), hits)

    def bench_snf(mod):
        return [mod.smith_normal_form(m, 12) for m in snf_mats]

    def bench_tree_dp(mod):
        out = 0
        for (p1, l1), (p2, l2) in tree_pairs:
            out += mod.tree_embed_dp(p1, l1, p2, l2, leq, 3)
        return out

    def bench_tree_search(mod):
        out = 0
        for (p1, l1), (p2, l2) in tree_pairs:
            out += mod.tree_embed_search(p1, l1, p2, l2, leq, 3)
        return out

    return [
        ("right_kernel_lattice 24x40 x6", bench_kernel),
        ("IntLattice add+reduce 32d x200", bench_lattice),
        ("smith_normal_form 10x12 x10", bench_snf),
        ("tree_embed_dp x4000", bench_tree_dp),
        ("tree_embed_search x4000", bench_tree_search),
    ]


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    mods = [("python", _purecore)]
    if _fastcore is not None:
        mods.append(("compiled", _fastcore))
    else:
        print("compiled core not built; timing the pure backend only")

    print(f"{'workload':36} " + " ".join(f"{name:>10}" for name, _ in mods) + "  speedup")
    for label, bench in workloads():
        times = []
        results = []
        for _, mod in mods:
            best = None
            result = None
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                result = bench(mod)
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            times.append(best)
            results.append(result)
        if len(results) == 2 and results[0] != results[1]:
            raise AssertionError(f"backend results differ on {label}")
        cells = " ".join(f"{t * 1000:9.1f}ms" for t in times)
        speedup = f"{times[0] / times[-1]:7.1f}x" if len(times) == 2 else "      -"
        print(f"{label:36} {cells} {speedup}")


if __name__ == "__main__":
    main()
