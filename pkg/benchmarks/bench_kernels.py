"""Compiled vs pure-Python PL kernels on a refined cone disk.

    python benchmarks/bench_kernels.py [--refine 16] [--rings 6] [--repeat 5]

Times the three kernels on the inputs of one geodesic distance field and
one sublevel measurement, checks that both backends agree, and prints a
table of best-of-N wall times.
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from revisop import kernels
from revisop.plsurf import cone_disk, geodesic_distance, steiner_graph


def kernel_inputs(refine: int, rings: int):
    s, _ = cone_disk(2.5 * math.pi, radius=1.5, rings=rings)
    g = steiner_graph(s, refine)
    field = geodesic_distance(s, 0, refine)
    bd = field.node_distances[g.bnd_nodes]
    tri_xy = g.grid_xy[:, g.sub_tris].reshape(-1, 3, 2)
    tri_d = field.grid_distances[:, g.sub_tris].reshape(-1, 3)
    calls = {
        "dijkstra": lambda k: k.dijkstra(g.indptr, g.indices, g.weights, np.array([0], dtype=np.int64),
                                         np.array([0.0])),
        "extend_min_plus": lambda k: k.extend_min_plus(g.grid_xy, g.grid_xy[:, g.bnd_pos], bd),
        "sublevel_measure": lambda k: k.sublevel_measure(tri_xy, tri_d, 1.0),
    }
    sizes = {"dijkstra": f"{g.n_nodes} nodes, {len(g.indices)} arcs",
             "extend_min_plus": f"{g.grid_xy.shape[0]} faces x {g.grid_xy.shape[1]} grid pts",
             "sublevel_measure": f"{len(tri_d)} sub-triangles"}
    return calls, sizes


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--refine", type=int, default=16)
    ap.add_argument("--rings", type=int, default=6)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    impls = kernels.backends()
    if "cython" not in impls:
        print("compiled kernels are not built; only the Python fallback is available")
    calls, sizes = kernel_inputs(args.refine, args.rings)
    print(f"refine={args.refine} rings={args.rings} best of {args.repeat}")
    print(f"{'kernel':<18}{'size':<34}" + "".join(f"{n:>12}" for n in impls) + f"{'speedup':>10}")
    for name, call in calls.items():
        results = {n: call(k) for n, k in impls.items()}
        ref = np.asarray(results["python"], dtype=float)
        for n, r in results.items():
            if not np.allclose(np.asarray(r, dtype=float), ref, rtol=1e-12, atol=1e-12):
                raise SystemExit(f"{name}: backend {n} disagrees with the Python fallback")
        times = {n: min(timeit.repeat(lambda: call(k), number=1, repeat=args.repeat)) for n, k in impls.items()}
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{name:<18}{sizes[name]:<34}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in impls)
              + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
