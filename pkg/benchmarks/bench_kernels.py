"""Compare the compiled and pure-Python search kernels.

Three workloads per group:

* greedy   - random greedy restarts (the random search's inner loop);
* extend   - full enumeration of locally maximal extensions of every orbit
             representative triple (the exhaustive search's inner loop);
* analyze  - cover/block computation for random product-free sets.

Both backends are checked to return identical results before timing.

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --groups "D(26)" "ESP(32)" --repeat 5 --json
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from filled_groups import automorphism_group, build_group
from filled_groups.kernels import MODE_ALL, available_backends, kernel_for, stream_state
from filled_groups.search import orbit_representatives_triples

DEFAULT_GROUPS = ("D(22)", "D(26)", "D(8)xC(2)", "ESP(32)", "D(8)*Q(8)", "Q(8)xC(3)")


def _workloads(group, restarts: int):
    reps = [r.indices() for r in orbit_representatives_triples(group, automorphism_group(group))]
    states = [stream_state(0, r) for r in range(restarts)]
    samples = [kernel_for(group, "python").greedy([], s)[0][:-1] for s in states[:200]]

    def greedy(k):
        return [k.greedy([], s) for s in states]

    def extend(k):
        return [k.extend(r, MODE_ALL)[:2] for r in reps]

    def analyze(k):
        return [k.analyze(m) for m in samples]

    return {"greedy": greedy, "extend": extend, "analyze": analyze}


def _time(fn, kernel, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(kernel)
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run(groups, restarts: int, repeat: int) -> list[dict]:
    backends = available_backends()
    rows = []
    for spec in groups:
        g = build_group(spec)
        for name, fn in _workloads(g, restarts).items():
            kernels = {b: kernel_for(g, b) for b in backends}
            results = {b: fn(k) for b, k in kernels.items()}
            if len({repr(r) for r in results.values()}) != 1:
                raise AssertionError(f"backends disagree on {spec} {name}")
            row = {"group": spec, "order": g.order, "workload": name}
            for b, k in kernels.items():
                row[b] = _time(fn, k, repeat)
            if "compiled" in row:
                row["speedup"] = row["python"] / row["compiled"] if row["compiled"] else float("inf")
            rows.append(row)
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--groups", nargs="+", default=list(DEFAULT_GROUPS))
    p.add_argument("--restarts", type=int, default=500)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--json", action="store_true", help="print rows as JSON instead of a table")
    args = p.parse_args(argv)

    rows = run(args.groups, args.restarts, args.repeat)
    if args.json:
        print(json.dumps(rows, indent=2))
        return 0
    if "compiled" not in available_backends():
        print("compiled backend not built; timing the Python kernel only", file=sys.stderr)
    print(f"{'group':<14}{'order':>6}  {'workload':<9}{'python s':>11}{'compiled s':>12}{'speedup':>9}")
    for r in rows:
        compiled = f"{r['compiled']:12.4f}" if "compiled" in r else f"{'-':>12}"
        speed = f"{r['speedup']:8.1f}x" if "speedup" in r else f"{'-':>9}"
        print(f"{r['group']:<14}{r['order']:>6}  {r['workload']:<9}{r['python']:11.4f}{compiled}{speed}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
