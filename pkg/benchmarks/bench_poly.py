"""Benchmark the compiled polynomial kernel against the pure-Python fallback.

Runs each workload twice in fresh subprocesses, once with the default kernel
selection and once with WITT_PURE=1, and reports wall times and the speedup.
A fresh process per run keeps kernel selection, memo tables and the on-disk
structural-polynomial cache from leaking between measurements.

Usage: python3 benchmarks/bench_poly.py [--repeat N]
"""
import argparse
import json
import os
import subprocess
import sys
import tempfile
import time

WORKLOADS = ("structpoly", "powers", "ghost-roundtrip")


def run_workload(name):
    from wittvec import poly
    from wittvec.poly import polyring
    from wittvec.rings import ZZ, Algebra
    from wittvec.witt import (
        GhostVector,
        WittContext,
        structural_polys,
        unghost,
        verify_ghost_compat,
        ghost,
    )

    t0 = time.monotonic()
    if name == "structpoly":
        for base, pi, n, op in ((ZZ, 3, 4, "product"), (ZZ, 5, 3, "sum")):
            sps = structural_polys(WittContext(base, pi, n), op)
            assert verify_ghost_compat(sps)
    elif name == "powers":
        ring = polyring(ZZ, ("x", "y", "z"))
        f = ring.add(
            ring.add(ring.one, ring.gen(0)),
            ring.add(ring.scale(ring.gen(1), 2), ring.scale(ring.gen(2), 3)),
        )
        g = ring.pow(f, 24)
        h = ring.mul(g, g)
        # dense of total degree 48 in three variables
        assert len(h) == 20825
    else:
        ctx = WittContext(ZZ, 2, 6)
        alg = Algebra(ZZ, ZZ)
        for k in range(400):
            w = unghost(
                GhostVector(ctx, alg, tuple(3 + k for _ in range(ctx.n + 1)))
            )
            assert ghost(w).entries == tuple(3 + k for _ in range(ctx.n + 1))
    return poly.KERNEL, time.monotonic() - t0


def measure(name, pure, cache_dir):
    env = dict(os.environ, WITT_CACHE_DIR=cache_dir)
    env.pop("WITT_PURE", None)
    if pure:
        env["WITT_PURE"] = "1"
    out = subprocess.run(
        [sys.executable, __file__, "--worker", name],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--worker", choices=WORKLOADS, help=argparse.SUPPRESS)
    ap.add_argument("--repeat", type=int, default=1, help="runs per cell; best time wins")
    args = ap.parse_args()
    if args.worker:
        kernel, seconds = run_workload(args.worker)
        print(json.dumps({"kernel": kernel, "seconds": seconds}))
        return
    print(f"{'workload':<16} {'compiled':>10} {'pure':>10} {'speedup':>9}")
    for name in WORKLOADS:
        rows = {}
        for pure in (False, True):
            with tempfile.TemporaryDirectory() as cache_dir:
                best = None
                for _ in range(max(1, args.repeat)):
                    got = measure(name, pure, cache_dir)
                    if best is None or got["seconds"] < best["seconds"]:
                        best = got
                rows[pure] = best
        if rows[False]["kernel"] == "pure":
            print(f"{name:<16} compiled kernel unavailable; pure fallback "
                  f"{rows[True]['seconds']:.2f}s")
            continue
        ratio = rows[True]["seconds"] / max(rows[False]["seconds"], 1e-9)
        print(f"{name:<16} {rows[False]['seconds']:>9.2f}s {rows[True]['seconds']:>9.2f}s "
              f"{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
