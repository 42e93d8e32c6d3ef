"""Time the compiled and pure-Python clique kernels on the same scheme graphs.

Usage: python benchmarks/bench_kernels.py [--repeat N] [--budget SECONDS]
"""
import argparse
import statistics
import time

import numpy as np

from jscheme.combinat import SchemeParams, all_masks
from jscheme.graphs import adjacency_from_masks, build_graph
from jscheme.search import KERNELS, clique_in_adjacency, max_clique, max_coclique

CASES = [
    ("omega", 9, 4, {1, 3}),
    ("omega", 10, 4, {2}),
    ("alpha", 10, 4, {1, 4}),
    ("omega", 12, 4, {3}),
    ("alpha", 12, 4, {1, 3}),
    ("omega", 11, 5, {1, 2}),
    ("alpha", 12, 4, {1, 4}),
    ("alpha", 13, 4, {1, 4}),
]
# raw kernel on an induced subgraph, no symmetry reduction
RAW_CASES = [(12, 4, {2}, 300, 7), (13, 5, {1, 3}, 400, 11)]


def run(quantity, n, k, classes, backend, budget):
    g = build_graph(SchemeParams(n, k), classes)
    fn = max_clique if quantity == "omega" else max_coclique
    start = time.perf_counter()
    res = fn(g, time_budget=budget, backend=backend)
    return time.perf_counter() - start, res


def run_raw(n, k, classes, m, seed, backend):
    p = SchemeParams(n, k)
    rng = np.random.default_rng(seed)
    masks = np.sort(rng.choice(all_masks(p), size=m, replace=False))
    adj = adjacency_from_masks(masks, k, classes)
    start = time.perf_counter()
    size, _, complete, _ = clique_in_adjacency(adj, backend=backend)
    return time.perf_counter() - start, size, complete


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--budget", type=float, default=120.0)
    args = ap.parse_args()

    backends = sorted(KERNELS)
    print(f"backends: {', '.join(backends)}")
    header = f"{'case':<28}{'value':>6}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for quantity, n, k, classes in CASES:
        label = f"{quantity} G_{{{','.join(map(str, sorted(classes)))}}}({n},{k})"
        times, values = {}, set()
        for b in backends:
            runs = []
            for _ in range(args.repeat):
                dt, res = run(quantity, n, k, classes, b, args.budget)
                runs.append(dt)
                values.add((res.size, res.proved_optimal))
            times[b] = statistics.median(runs)
        if len(values) != 1:
            raise SystemExit(f"backends disagree on {label}: {values}")
        size, proved = values.pop()
        line = f"{label:<28}{str(size) + ('' if proved else '?'):>6}"
        line += "".join(f"{times[b]:>11.3f}s" for b in backends)
        if len(backends) == 2:
            line += f"{times['python'] / max(times['compiled'], 1e-9):>9.1f}x"
        print(line)
    for n, k, classes, m, seed in RAW_CASES:
        label = f"raw G_{{{','.join(map(str, sorted(classes)))}}}({n},{k})[{m}]"
        times, values = {}, set()
        for b in backends:
            runs = []
            for _ in range(args.repeat):
                dt, size, complete = run_raw(n, k, classes, m, seed, b)
                runs.append(dt)
                values.add((size, complete))
            times[b] = statistics.median(runs)
        if len(values) != 1:
            raise SystemExit(f"backends disagree on {label}: {values}")
        size, complete = values.pop()
        line = f"{label:<28}{str(size) + ('' if complete else '?'):>6}"
        line += "".join(f"{times[b]:>11.3f}s" for b in backends)
        if len(backends) == 2:
            line += f"{times['python'] / max(times['compiled'], 1e-9):>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
