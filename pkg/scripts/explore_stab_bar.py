#!/usr/bin/env python3
"""Probe empirical bar stabilization across small signed matrices.

For each matrix the finite-level bar expansion is recentered at increasing
even shifts; the script reports the shift at which consecutive expansions
first agree, or that the budget ran out. Useful for choosing test families
for the stably canonical machinery.
"""

import argparse
import itertools
import time

from cschur.matrices import CodedMatrix
from cschur.ring import WeightFunction
from cschur.stab import StabError, lift, protected_residues, stab_bar_spec


def small_signed_matrices(r, offdiag_budget, diag_low):
    """Signed symmetric matrices with little off-diagonal mass."""
    n = 2 * r + 2
    offs = [(0, 1), (1, 2)] if r >= 2 else [(0, 1)]
    offs += [(i, i + 2) for i in range(max(1, r - 1), r + 1)]
    for mass in range(offdiag_budget + 1):
        for combo in itertools.combinations_with_replacement(offs, mass):
            entries = {}
            for pos in combo:
                entries[pos] = entries.get(pos, 0) + 1
            for d0 in (1, 3):
                for dm in range(diag_low, 2):
                    full = dict(entries)
                    full[(0, 0)] = d0
                    full[(r + 1, r + 1)] = 1
                    for i in range(1, r + 1):
                        full[(i, i)] = full.get((i, i), 0) + dm
                    try:
                        yield CodedMatrix(r, "xitilde", full).validate()
                    except Exception:
                        continue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--budget", type=int, default=12)
    ap.add_argument("--variant", default="jj", choices=["jj", "ji", "ij", "ii"])
    ap.add_argument("--L", default="1,1,1")
    args = ap.parse_args()
    L = WeightFunction(*(int(x) for x in args.L.split(",")))
    seen = set()
    for a in small_signed_matrices(args.r, 1, -2):
        if a in seen:
            continue
        seen.add(a)
        t0 = time.time()
        try:
            exp = stab_bar_spec(a, L, p_budget=args.budget, variant=args.variant)
            status = f"stabilized, {len(exp)} terms"
        except StabError as exc:
            status = f"no stabilization ({exc})"
        print(
            f"{sorted(a.entries.items())!s:<60} {status} [{time.time()-t0:.1f}s]"
        )


if __name__ == "__main__":
    main()
