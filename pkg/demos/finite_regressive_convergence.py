"""Compare con⁻(α,H) with con⁻(α)H on small finite groups.

The product con⁻(α)H always contains con⁻(α,H). The two differ exactly when
α(H) is a proper subgroup of H; this script shows the smallest such case and
then tallies the whole catalog.

    python3 demos/finite_regressive_convergence.py
"""
from collections import Counter

from tidyscale import finite as fin
from tidyscale import theorems as th


def smallest_case():
    G = fin.build_group("C2")
    zero = fin.FiniteInstance(G, [0, 0], name="zero map")
    r = th.finite_B(zero, G.full_mask)
    print("α = 0 on C2, H = C2")
    print("  con⁻(α,H)  =", r.detail["con_minus_mod_H"])
    print("  con⁻(α)H   =", r.detail["con_minus_times_H"])
    print("  witness    :", r.counterexample["element"], "has no preimage chain under α")
    print()


def tally():
    seen = Counter()
    for inst in fin.catalog_instances():
        for H in fin.invariant_subgroups(inst):
            r = th.finite_B(inst, H)
            stable = inst.image(H) == H
            seen[(stable, r.passed)] += 1
            assert r.detail["left_in_right"]
    print("catalog tally of (α(H) = H, equality holds):")
    for key in sorted(seen):
        print(f"  {key}: {seen[key]}")


if __name__ == "__main__":
    smallest_case()
    tally()
