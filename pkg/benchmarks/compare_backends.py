#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-Python fallback.

Runs the same decode workloads in two subprocesses (one per backend,
selected via POLARSSC_DISABLE_NUMBA) and prints a speedup table. The two
backends produce bit-identical decode results; only throughput differs.

Usage: python benchmarks/compare_backends.py [--frames 2000]
"""

import argparse
import json
import os
import subprocess
import sys

WORK = r"""
import json, sys, time
import polarssc
from polarssc import build_code, sigma_from_snr
from polarssc.channel import batch_channel
from polarssc import _kernels as K

frames = int(sys.argv[1])
code = build_code(7, 64, "rm")
p = sigma_from_snr(2.0, code.rate)
u, llrs = batch_channel(code.N, code.info_indices, p, 12, 0, frames)

def timeit(fn, reps=1):
    fn()  # warm-up / JIT
    t0 = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - t0) / reps

results = {
    "backend": polarssc.backend_name(),
    "sc": timeit(lambda: K.sc_decode_batch(llrs, code.frozen_mask, code.n)),
    "scl8": timeit(lambda: K.scl_decode_batch(llrs, code.frozen_mask, 8, code.n)),
    "ssc": timeit(lambda: K.ssc_decode_batch(llrs, code.frozen_mask, code.n)),
    "ssc-list8": timeit(lambda: K.ssc_list_decode_batch(llrs, code.frozen_mask, 8, code.n)),
}
print(json.dumps(results))
"""


def run_backend(disable: bool, frames: int) -> dict:
    env = dict(os.environ)
    env["POLARSSC_DISABLE_NUMBA"] = "1" if disable else "0"
    out = subprocess.run(
        [sys.executable, "-c", WORK, str(frames)],
        env=env, capture_output=True, text=True,
    )
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(1)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--frames", type=int, default=2000,
                    help="frames per workload (python path is ~100x slower)")
    args = ap.parse_args()

    numba = run_backend(False, args.frames)
    python = run_backend(True, max(args.frames // 50, 20))

    print(f"P(128,64) rm @ 2 dB, {args.frames} frames (numba) "
          f"vs {max(args.frames // 50, 20)} frames (python)")
    print(f"{'workload':<12} {'numba f/s':>12} {'python f/s':>12} {'speedup':>9}")
    for key in ("sc", "scl8", "ssc", "ssc-list8"):
        fn = args.frames / numba[key]
        fp = max(args.frames // 50, 20) / python[key]
        print(f"{key:<12} {fn:>12.0f} {fp:>12.1f} {fn / fp:>8.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
