#!/usr/bin/env python3
"""Tabulate runtime and peak node counts across benchmark sizes.

Examples:
    python scripts/scaling_benchmarks.py
    python scripts/scaling_benchmarks.py --family qft --sizes 8,16,32,64,128
    python scripts/scaling_benchmarks.py --family grover --sizes 4,6,8,10,12
"""

import argparse
import random

from qdd import EngineConfig, NormDriftError, gen_entangle, gen_grover, \
    gen_qft, run

FAMILIES = ("entangle", "qft", "grover")
DEFAULT_SIZES = {
    "entangle": "16,32,64,128,256",
    "qft": "8,16,24,32,40,48",
    "grover": "4,6,8,10,12",
}


def build(family: str, n: int, seed: int):
    rng = random.Random(seed)
    if family == "entangle":
        return gen_entangle(n)
    if family == "qft":
        return gen_qft(n, "".join(rng.choice("01") for _ in range(n)))
    return gen_grover(n, "".join(rng.choice("01") for _ in range(n)))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", choices=FAMILIES + ("all",), default="all")
    ap.add_argument("--sizes", help="comma-separated qubit counts")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    families = FAMILIES if args.family == "all" else (args.family,)
    for family in families:
        sizes = [int(s) for s in
                 (args.sizes or DEFAULT_SIZES[family]).split(",")]
        print(f"\n{family}")
        print(f"{'n':>5} {'ops':>7} {'peak state':>11} {'peak table':>11} "
              f"{'time [ms]':>10} {'norm dev':>10}")
        for n in sizes:
            circuit = build(family, n, args.seed)
            try:
                _, stats = run(circuit, EngineConfig(seed=args.seed))
            except NormDriftError as err:
                # amplitudes shrank into the interning tolerance; the
                # probability-sum check refuses to continue silently
                print(f"{n:>5} {len(circuit.ops):>7}  norm drift: {err}")
                continue
            print(f"{n:>5} {len(circuit.ops):>7} "
                  f"{stats.peak_vector_nodes:>11} "
                  f"{stats.peak_unique_nodes:>11} "
                  f"{stats.wall_time_ms:>10.1f} "
                  f"{stats.final_norm_deviation:>10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
