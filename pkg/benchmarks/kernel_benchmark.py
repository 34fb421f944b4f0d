#!/usr/bin/env python3
"""Compare the compiled and pure-Python minimization kernels.

Times fixed-length token minimization (the hot loop of the experiment
harness) over alert zones of growing radius on a 32x32 grid, checking on
the way that both backends emit identical tokens.

Usage: python benchmarks/kernel_benchmark.py [--trials N]
"""

import argparse
import statistics
import time

from privzone import build_fixed_length, generate_sigmoid_probabilities, sample_alert_zone
from privzone.kernels import available_backends
from privzone.tokens import fixed_length_minimize


def time_backend(backend, zones_indexes, repeats):
    samples = []
    tokens = None
    for _ in range(repeats):
        start = time.perf_counter()
        tokens = [fixed_length_minimize(zone, backend=backend).tokens for zone in zones_indexes]
        samples.append(time.perf_counter() - start)
    return min(samples), tokens


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=20, help="zones per radius")
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats, best-of")
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    if "compiled" not in backends:
        print("compiled kernel not built; timing the pure-Python backend only")

    grid = generate_sigmoid_probabilities(32, 32, 0.99, 100, seed=args.seed)
    _, index_map = build_fixed_length(grid)

    print(f"\n{'radius':>8} {'cells':>7} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for radius in (20.0, 50.0, 100.0, 200.0, 300.0):
        zones = [
            sample_alert_zone(grid, 10.0, radius, seed=args.seed + k)
            for k in range(args.trials)
        ]
        zones_indexes = [
            sorted(index_map.index_of(c) for c in zone.cell_ids) for zone in zones
        ]
        mean_cells = statistics.fmean(len(z.cell_ids) for z in zones)

        py_time, py_tokens = time_backend("python", zones_indexes, args.repeats)
        line = f"{radius:>7.0f}m {mean_cells:>7.1f} {py_time * 1e3 / args.trials:>10.2f}ms"
        if "compiled" in backends:
            cy_time, cy_tokens = time_backend("compiled", zones_indexes, args.repeats)
            assert py_tokens == cy_tokens, "backends disagree"
            line += f" {cy_time * 1e3 / args.trials:>10.2f}ms {py_time / cy_time:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
