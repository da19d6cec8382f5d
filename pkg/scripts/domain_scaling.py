#!/usr/bin/env python3
"""Scaling of the interval engine with the domain width.

Generates position chains over [0, L] for growing L and reports wall time
and the number of allocated state cells for the joint interval engine.
The cell count stays constant while L grows by orders of magnitude; the
per-value engine refuses to even allocate beyond its cap.
"""

import argparse
import time

from softbounds.core import CapError
from softbounds.generators import gen_spacerchain
from softbounds.propagation import PropState, enforce_bac_zero


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=10)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument(
        "--widths", type=int, nargs="+", default=[1000, 10_000, 100_000, 1_000_000]
    )
    args = ap.parse_args()

    print(f"{'L':>10}{'cells':>8}{'deletions':>11}{'w0':>4}{'ms':>9}{'value mode':>12}")
    for L in args.widths:
        inst = gen_spacerchain(m=args.m, L=L, seed=args.seed)
        st = PropState(inst)
        t0 = time.perf_counter()
        rep = enforce_bac_zero(st)
        ms = (time.perf_counter() - t0) * 1000
        try:
            PropState(inst, mode="values")
            value_mode = "ok"
        except CapError:
            value_mode = "refused"
        print(
            f"{L:>10}{st.allocation_cells():>8}{rep.deletions:>11}"
            f"{rep.w_zero:>4}{ms:>9.1f}{value_mode:>12}"
        )


if __name__ == "__main__":
    main()
