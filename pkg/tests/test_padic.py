"""p-adic backend: arithmetic, lattices, Newton polygons, scale and blocks."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tidyscale.core import displacement_index, minus_stage, tidy_above
from tidyscale.padic import backend as pb
from tidyscale.padic.arith import det, diag, hensel_lift, inverse, matmul, pmul, rational_reconstruct, to_residue, valuation
from tidyscale.padic.lattice import Lattice, image, intersect, lattice_index, lattice_sum, preimage_meet
from tidyscale.padic.poly import charpoly, newton_polygon, slope_factors

PRIMES = (2, 3, 5)


def vp_oracle(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return sympy.multiplicity(p, x.numerator) - sympy.multiplicity(p, x.denominator)


# -- arithmetic ------------------------------------------------------------------------


@given(st.fractions().filter(lambda x: x != 0), st.sampled_from(PRIMES))
def test_valuation_matches_multiplicity(x, p):
    assert valuation(x, p) == vp_oracle(x, p)


def test_valuation_of_zero_is_infinite():
    assert valuation(0, 5) == float("inf")


@given(st.integers(-50, 50), st.integers(1, 50))
def test_rational_reconstruction_round_trip(a, b):
    x = Fraction(a, b)
    m = 7**12
    assume(b % 7)
    assert rational_reconstruct(to_residue(x, 7, 12), m) == x


def test_hensel_lift_factors():
    # x^2 - 3x + 5 over Z_5: (x)(x - 3) mod 5 lifts
    f = [5, -3, 1]
    g, h = hensel_lift(f, [0, 1], [-3 % 5, 1], 5, 8)
    mod = 5**8
    prod = pmul(g, h, mod)
    assert [c % mod for c in prod] == [c % mod for c in f]


ints = st.integers(-9, 9)


@st.composite
def square_matrices(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    return [[Fraction(draw(ints)) for _ in range(n)] for _ in range(n)]


@settings(max_examples=150, deadline=None)
@given(square_matrices())
def test_charpoly_matches_sympy(A):
    x = sympy.Symbol("x")
    ref = sympy.Matrix(A).charpoly(x).all_coeffs()[::-1]
    assert charpoly(A) == [Fraction(int(c.p), int(c.q)) for c in ref]


@settings(max_examples=150, deadline=None)
@given(square_matrices())
def test_det_matches_sympy(A):
    assert det(A) == Fraction(str(sympy.Matrix(A).det()))


# -- lattices --------------------------------------------------------------------------


@st.composite
def full_rank_integer_rows(draw, n):
    rows = [[draw(ints) for _ in range(n)] for _ in range(n)]
    assume(det(rows) != 0)
    return rows


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 3).flatmap(full_rank_integer_rows))
def test_lattice_index_is_determinant_valuation(p, rows):
    n = len(rows)
    L = Lattice.span(p, n, rows)
    assert L.is_open
    assert lattice_index(Lattice.standard(p, n), L) == p ** vp_oracle(det(rows), p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 3).flatmap(lambda n: st.tuples(full_rank_integer_rows(n), full_rank_integer_rows(n))))
def test_sum_intersection_laws(p, pair):
    R1, R2 = pair
    n = len(R1)
    L, M = Lattice.span(p, n, R1), Lattice.span(p, n, R2)
    S, I = lattice_sum(L, M), intersect(L, M)
    assert S.contains(L) and S.contains(M) and L.contains(I) and M.contains(I)
    # [S : L] = [M : I]
    assert lattice_index(S, L) == lattice_index(M, I)
    assert lattice_index(S, I) == lattice_index(S, L) * lattice_index(L, I)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES), square_matrices(), st.data())
def test_preimage_meet_is_largest(p, A, data):
    n = len(A)
    L = Lattice.standard(p, n)
    M = Lattice.span(p, n, data.draw(full_rank_integer_rows(n)))
    P = preimage_meet(A, M, L)
    assert L.contains(P)
    assert M.contains(image(A, P))


def test_lattice_index_errors():
    Z = Lattice.standard(3, 2)
    with pytest.raises(ValueError):
        lattice_index(Lattice.span(3, 2, [[1, 0]]), Z)
    with pytest.raises(ValueError):
        lattice_index(Z, Lattice.span(3, 2, [[1, 0]]))


# -- Newton polygon and scale ----------------------------------------------------------


def test_newton_polygon_examples():
    NP = newton_polygon(charpoly([[0, -5], [1, 3]]), 5)
    assert sorted(NP.root_valuations()) == [0, 1]
    assert NP.expansion_exponent() == 0
    NP = newton_polygon([0, 0, 1], 3)
    assert NP.zero_roots == 2


def test_slope_factors_separate_valuations():
    # factors are returned up to scalars, so compare degrees and root valuations
    cp = charpoly([[Fraction(1, 5), 0, 0, 0], [0, 1, 0, 0], [0, 0, 5, 0], [0, 0, 0, 0]])
    f = slope_factors(cp, 5, 10)
    assert f["zero"] == [0, 1]
    for key, sign in (("pos", 1), ("unit", 0), ("neg", -1)):
        NP = newton_polygon([Fraction(c) for c in f[key]], 5)
        vals = NP.root_valuations()
        assert len(vals) == 1
        assert (vals[0] > 0) - (vals[0] < 0) == sign


def triangular_scale(diagonal, p):
    s = 1
    for d in diagonal:
        if d != 0 and vp_oracle(d, p) < 0:
            s *= p ** (-vp_oracle(d, p))
    return s


nonzero_small = st.fractions(min_value=-9, max_value=9, max_denominator=27).filter(lambda x: x != 0)


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(PRIMES), st.integers(1, 3).flatmap(lambda n: st.tuples(st.lists(st.one_of(st.just(Fraction(0)), nonzero_small), min_size=n, max_size=n), full_rank_integer_rows(n))))
def test_scale_of_conjugated_triangular(p, data):
    diagonal, P = data
    n = len(diagonal)
    T = [[diagonal[i] if i == j else (Fraction(1) if j == i + 1 else Fraction(0)) for j in range(n)] for i in range(n)]
    P = [[Fraction(x) for x in r] for r in P]
    A = matmul(matmul(P, T), inverse(P))
    inst = pb.PadicInstance(p, A)
    expected = triangular_scale(diagonal, p)
    assert inst.newton_scale() == expected
    res = inst.scale_result()
    assert res.value == expected
    assert displacement_index(inst, res.subgroup) == expected


NAMED = [
    (lambda p: [[Fraction(1, p)]], lambda p: p),
    (lambda p: [[Fraction(1, p), 0], [0, Fraction(1, p * p)]], lambda p: p**3),
    (lambda p: [[Fraction(1, p), 0], [0, Fraction(1, p)]], lambda p: p**2),
    (lambda p: diag([Fraction(1, p), 1, p]), lambda p: p),
    (lambda p: [[1, 1], [0, 1]], lambda p: 1),
    (lambda p: [[0, 1], [0, 0]], lambda p: 1),
    (lambda p: [[Fraction(1, p), 1], [0, p]], lambda p: p),
]


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("make,expect", NAMED)
def test_named_scales(p, make, expect):
    value = expect(p)
    inst = pb.PadicInstance(p, make(p))
    res = inst.scale_result()
    assert res.value == value
    assert res.method == "newton-polygon"
    assert displacement_index(inst, res.subgroup) == value
    assert pb.stage_stabilized_scale(inst)[0] == value


def test_companion_scale_and_inverse():
    comp = [[0, -5], [1, 3]]
    inst = pb.PadicInstance(5, comp)
    assert inst.scale_result().value == 1
    inv = pb.PadicInstance(5, inverse(comp))
    assert inv.scale_result().value == 5
    assert displacement_index(inv, inv.scale_result().subgroup) == 5


def test_adapted_lattice_and_chart():
    for p in PRIMES:
        inst = pb.PadicInstance(p, diag([Fraction(1, p), 1, p]))
        ad = pb.adapted_tidy_lattice(inst)
        assert ad.certified and ad.lattice == Lattice.standard(p, 3)
        assert ad.displacement == p
        assert pb.chart_check(inst, ad.lattice).ok


def test_chart_rejects_non_tidy_lattice():
    p = 3
    inst = pb.PadicInstance(p, [[Fraction(1, p), 0], [0, p]])
    twisted = Lattice.span(p, 2, [[1, 1], [0, p**3]])
    assert displacement_index(inst, twisted) > inst.scale_result().value
    assert not pb.chart_check(inst, twisted).ok


def test_tidying_from_non_tidy_lattice():
    p = 3
    inst = pb.PadicInstance(p, [[Fraction(1, p), 0], [0, p]])
    U = Lattice.span(p, 2, [[1, 1], [0, p**3]])
    V = inst.tidying_procedure(U)
    assert displacement_index(inst, V) == inst.scale_result().value == p
    W, ell = tidy_above(inst, U)
    assert W == minus_stage(inst, U, ell)


def test_slope_split_dimensions():
    p = 5
    inst = pb.PadicInstance(p, diag([Fraction(1, p), 1, p]))
    split = inst.split()
    assert split.certified and split.is_exact
    assert split.dims == (1, 1, 1)
    dec = inst.decompose()
    assert dec.con.payload["basis"] == [["0", "0", "1"]]
    assert dec.lev.payload["basis"] == [["0", "1", "0"]]
    assert dec.con_minus.payload["basis"] == [["1", "0", "0"]]
    assert dec.nub.kind == "trivial"


def test_low_starting_precision_escalates():
    comp = [[0, -5], [1, 3]]
    inst = pb.PadicInstance(5, comp, precision=1)
    assert inst.split().certified
    assert inst.split().precision >= 1


def test_convergence_modulo_subspace():
    p = 3
    inst = pb.PadicInstance(p, [[Fraction(1, p), 0], [0, p]])
    assert inst.converges_mod(("orbit", [0, 1]), None)
    assert not inst.converges_mod(("orbit", [1, 0]), None)
    assert inst.converges_mod(("orbit", [1, 0]), [[1, 0]])
    assert inst.converges_mod(("regressive", [1, 0]), None)
    assert pb.in_con_minus_mod(inst, [1, 0], [])
    assert not pb.in_con_minus_mod(inst, [0, 1], [])


def test_core_part_is_lev_trace():
    p = 2
    inst = pb.PadicInstance(p, diag([Fraction(1, p), 1, p]))
    K = inst.core_part(Lattice.standard(p, 3))
    assert K == Lattice.span(p, 3, [[0, 1, 0]])


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        pb.PadicInstance(4, [[1]])
    with pytest.raises(ValueError):
        pb.PadicInstance(3, [[1, 2]])
