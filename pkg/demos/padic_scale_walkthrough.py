"""Walk through scale computations on a few p-adic linear maps.

For each map we print the Newton-polygon scale, the index sequence of the
minus stages starting from the standard lattice, and the adapted lattice.

    python3 demos/padic_scale_walkthrough.py
"""
from fractions import Fraction

from tidyscale.core import displacement_index, minus_trace, tidy_above
from tidyscale.padic import backend as pb
from tidyscale.padic.arith import inverse
from tidyscale.padic.lattice import Lattice

COMPANION = [[0, -5], [1, 3]]

CASES = [
    ("diag(1/3, 1, 3) over Q_3", pb.PadicInstance(3, [[Fraction(1, 3), 0, 0], [0, 1, 0], [0, 0, 3]])),
    ("companion of x^2 - 3x + 5 over Q_5", pb.PadicInstance(5, COMPANION)),
    ("its inverse", pb.PadicInstance(5, inverse(COMPANION))),
    ("upper triangular (1/2, 1; 0, 2) over Q_2", pb.PadicInstance(2, [[Fraction(1, 2), 1], [0, 2]])),
]


def show(name, inst):
    res = inst.scale_result()
    print(f"== {name}")
    print(f"   s = {res.value} via {res.method}")
    # a deliberately lopsided start lattice, so the stages have work to do
    skew = Lattice.span(inst.p, inst.n, [[inst.p ** (4 * (i == 0)) if i == j else 0 for j in range(inst.n)] for i in range(inst.n)])
    trace = minus_trace(inst, skew, 8)
    print(f"   minus-stage indices from a skewed lattice: {trace.indices()}")
    print(f"   stabilised from stage {trace.stabilized_from()}")
    W = pb.adapted_tidy_lattice(inst).lattice
    print(f"   adapted lattice displacement: {displacement_index(inst, W)}")
    V, steps = tidy_above(inst, skew)
    print(f"   tidying from a skewed lattice: {steps} steps, displacement {displacement_index(inst, V)}")


if __name__ == "__main__":
    for name, inst in CASES:
        show(name, inst)
