"""Benchmark the compiled scoring kernels against the pure-Python fallback.

Generates random bipartite CSR structures and skip-gram batches, times each
kernel under both backends, and prints a comparison table.

Usage: python3 benchmarks/bench_kernels.py [--seed N] [--repeats N]
"""

import argparse
import time

import numpy as np

from keyselect._kernels import _scoring_py

try:
    from keyselect._kernels import _scoring_cy
except ImportError:
    _scoring_cy = None


def random_bipartite_csr(rng, n_lefts, n_tags, n_edges):
    """Deduplicated random edge set as (tag->lefts CSR, left->tags CSR)."""
    lefts = rng.integers(n_lefts, size=n_edges)
    tags = rng.integers(n_tags, size=n_edges)
    edges = np.unique(np.stack([tags, lefts], axis=1), axis=0)

    tag_indptr = np.zeros(n_tags + 1, dtype=np.int64)
    np.add.at(tag_indptr, edges[:, 0] + 1, 1)
    tag_indptr = np.cumsum(tag_indptr)
    tag_lefts = edges[:, 1].astype(np.int32)

    by_left = edges[np.lexsort((edges[:, 0], edges[:, 1]))]
    left_indptr = np.zeros(n_lefts + 1, dtype=np.int64)
    np.add.at(left_indptr, by_left[:, 1] + 1, 1)
    left_indptr = np.cumsum(left_indptr)
    left_tags = by_left[:, 0].astype(np.int32)
    return tag_indptr, tag_lefts, left_indptr, left_tags


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_labeled_neighbor_counts(backend, rng, repeats):
    tag_indptr, tag_lefts, _, _ = random_bipartite_csr(rng, 5000, 2000, 60_000)
    cands = np.arange(2000, dtype=np.int64)
    pos = (rng.random(5000) < 0.3).astype(np.uint8)
    neg = ((rng.random(5000) < 0.3) & (pos == 0)).astype(np.uint8)
    return best_of(lambda: backend.labeled_neighbor_counts(
        tag_indptr, tag_lefts, cands, pos, neg), repeats)


def bench_cooccurrence_degrees(backend, rng, repeats):
    tag_indptr, tag_lefts, left_indptr, left_tags = random_bipartite_csr(
        rng, 2000, 800, 30_000)
    cands = np.arange(800, dtype=np.int64)
    active = (rng.random(2000) < 0.6).astype(np.uint8)
    return best_of(lambda: backend.cooccurrence_degrees(
        cands, tag_indptr, tag_lefts, left_indptr, left_tags, active), repeats)


def bench_sgns_train(backend, rng, repeats):
    n_vocab, dim, n_pairs, negatives = 500, 32, 20_000, 5
    centers = rng.integers(n_vocab, size=n_pairs).astype(np.int32)
    contexts = rng.integers(n_vocab, size=n_pairs).astype(np.int32)
    negs = rng.integers(n_vocab, size=(n_pairs, negatives)).astype(np.int32)
    w_in0 = (rng.random((n_vocab, dim)) - 0.5) / dim

    def run():
        w_in = w_in0.copy()
        w_out = np.zeros((n_vocab, dim))
        backend.sgns_train(w_in, w_out, centers, contexts, negs, 0.025)

    return best_of(run, repeats)


BENCHMARKS = [
    ("labeled_neighbor_counts", bench_labeled_neighbor_counts),
    ("cooccurrence_degrees", bench_cooccurrence_degrees),
    ("sgns_train", bench_sgns_train),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    if _scoring_cy is None:
        print("cython backend not built; showing pure-python timings only")

    print(f"{'kernel':<26}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, bench in BENCHMARKS:
        t_py = bench(_scoring_py, np.random.default_rng(args.seed), args.repeats)
        if _scoring_cy is None:
            print(f"{name:<26}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        t_cy = bench(_scoring_cy, np.random.default_rng(args.seed), args.repeats)
        print(f"{name:<26}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
              f"{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
