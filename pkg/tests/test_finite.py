"""Finite backend against brute-force oracles written independently here."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tidyscale import finite as fin
from tidyscale.core import displacement_index, minus_stages, plus_stage, tidy_above

# -- brute-force oracles ------------------------------------------------------------


def brute_subgroups(G):
    n = G.order
    out = []
    for bits in range(1, 1 << n):
        els = [i for i in range(n) if bits >> i & 1]
        if not bits >> G.identity & 1:
            continue
        if all(bits >> G.table[a][b] & 1 for a in els for b in els):
            out.append(bits)
    return sorted(out)


def brute_endomorphisms(G):
    n = G.order
    return [
        f
        for f in itertools.product(range(n), repeat=n)
        if all(f[G.table[a][b]] == G.table[f[a]][f[b]] for a in range(n) for b in range(n))
    ]


def iterate(alpha, x, k):
    for _ in range(k):
        x = alpha[x]
    return x


# frozen counts: Hom(C2xC4, C2xC4) = 2*2*2*4; S3 has 6 automorphisms, 3 maps onto
# a C2 and the trivial map; D4 and Q8 from the brute-force oracle on generator pairs
ENDO_COUNTS = {"C2": 2, "C3": 3, "C4": 4, "C6": 6, "C8": 8, "C2xC2": 16, "C2xC4": 32, "C2^3": 512, "C3xC3": 81, "S3": 10, "D4": 36, "Q8": 28}
SUBGROUP_COUNTS = {"C2": 2, "C3": 2, "C4": 3, "C6": 4, "C8": 4, "C2xC2": 5, "C2xC4": 8, "C2^3": 16, "C3xC3": 6, "S3": 6, "D4": 10, "Q8": 6}


@pytest.mark.parametrize("name", fin.CATALOG)
def test_subgroups_match_brute_force(name):
    G = fin.build_group(name)
    subs = fin.all_subgroups(G)
    assert sorted(subs) == brute_subgroups(G)
    assert len(subs) == SUBGROUP_COUNTS[name]


@pytest.mark.parametrize("name", fin.CATALOG)
def test_endomorphism_counts(name):
    G = fin.build_group(name)
    endos = fin.all_endomorphisms(G)
    assert len(endos) == len(set(endos)) == ENDO_COUNTS[name]
    assert all(fin.is_endomorphism(G, a) for a in endos)


@pytest.mark.parametrize("name", [n for n in fin.CATALOG if fin.build_group(n).order <= 6])
def test_endomorphisms_match_brute_force(name):
    G = fin.build_group(name)
    assert sorted(fin.all_endomorphisms(G)) == brute_endomorphisms(G)


def test_catalog_size():
    assert len(fin.CATALOG) == 12
    assert len(fin.catalog_instances()) == sum(ENDO_COUNTS.values())


def test_group_constructors():
    G = fin.build_group([2, 4])
    assert G.order == 8 and G.name == "C2xC4"
    assert fin.build_group({"factors": [3]}).order == 3
    assert fin.build_group({"named": "Q8"}).order == 8
    T = fin.build_group({"table": [[0, 1], [1, 0]], "labels": ["e", "a"]})
    assert T.labels == ("e", "a")
    with pytest.raises(ValueError):
        fin.build_group({"table": [[0, 1], [0, 1]]})
    with pytest.raises(ValueError):
        fin.build_group("A5")


def test_non_abelian_structure():
    S3 = fin.build_group("S3")
    normal = [H for H in fin.all_subgroups(S3) if S3.is_normal(H)]
    assert sorted(bin(H).count("1") for H in normal) == [1, 3, 6]
    Q8 = fin.build_group("Q8")
    assert all(Q8.is_normal(H) for H in fin.all_subgroups(Q8))


def test_instance_rejects_non_homomorphism():
    G = fin.build_group("C4")
    with pytest.raises(ValueError):
        fin.FiniteInstance(G, [0, 1, 1, 3])


# -- decomposition against definitions ---------------------------------------------------


@pytest.mark.parametrize("name", fin.CATALOG)
def test_exact_sets_against_definitions(name):
    G = fin.build_group(name)
    n = G.order
    for alpha in fin.all_endomorphisms(G)[:40]:
        inst = fin.FiniteInstance(G, alpha)
        d = inst.decompose()
        con = G.mask_of(x for x in range(n) if iterate(alpha, x, n) == G.identity)
        ev = G.mask_of(iterate(alpha, x, n) for x in range(n))
        invariant = [U for U in brute_subgroups(G) if all(U >> alpha[x] & 1 for x in G.elements(U))]
        nub = G.full_mask
        for U in invariant:
            nub &= U
        assert d.con.payload == con
        assert d.par.payload == G.full_mask
        assert d.par_minus.payload == ev
        assert d.lev.payload == ev
        assert d.con_minus.payload == 1 << G.identity
        assert d.nub.payload == nub == 1 << G.identity
        assert d.bik.payload & ~d.nub.payload == 0


def test_small_decomposition_values():
    C6 = fin.build_group("C6")
    inst = fin.FiniteInstance(C6, [3 * x % 6 for x in range(6)])
    d = inst.decompose()
    assert C6.describe_mask(d.con.payload) == ["0", "2", "4"]
    assert C6.describe_mask(d.par_minus.payload) == ["0", "3"]


def test_scale_is_one_and_certified():
    for inst in fin.catalog_instances(["C4", "S3", "C2xC2"]):
        r = inst.scale_result()
        assert r.value == 1 and r.displacement == 1
        assert fin.exhaustive_scale(inst)[0] == 1


def test_non_tidy_subgroup_is_tidied():
    G = fin.build_group("C2xC2")
    swap = fin.FiniteInstance(G, [0, 2, 1, 3])
    U = fin.parse_mask(G, ["(0,0)", "(0,1)"])
    assert displacement_index(swap, U) == 2
    W = swap.tidying_procedure(U)
    assert displacement_index(swap, W) == 1


def test_tidying_procedure_everywhere():
    for inst in fin.catalog_instances(["C6", "S3", "D4", "C2xC4"]):
        for U in fin.all_subgroups(inst.G):
            steps = fin.tidying_steps(inst, U)
            W = steps[-1]
            assert inst.G.is_subgroup(W)
            assert displacement_index(inst, W) == 1
            if displacement_index(inst, U) == 1:
                assert W == U


def test_regressive_search_existence():
    for inst in fin.catalog_instances(["C4", "S3", "C2xC2"]):
        E = inst.eventual_image
        for x in range(inst.G.order):
            # modulo G any backward orbit converges, so only existence matters
            traj = fin.regressive_search(inst, x, inst.whole())
            assert (traj is not None) == bool(E >> x & 1)
            # modulo {e} the trajectory must reach e, forcing x = e
            assert (fin.regressive_search(inst, x, inst.trivial()) is not None) == (x == inst.G.identity)
            if traj is not None:
                assert traj[0] == x
                assert all(inst.alpha[traj[k + 1]] == traj[k] for k in range(8))


def test_regressive_search_needs_invariant_H():
    G = fin.build_group("C2xC2")
    swap = fin.FiniteInstance(G, [0, 2, 1, 3])
    with pytest.raises(fin.NotInvariant):
        fin.regressive_search(swap, 0, fin.parse_mask(G, ["(0,0)", "(0,1)"]))


def test_con_mod_examples():
    C4 = fin.build_group("C4")
    double = fin.FiniteInstance(C4, [0, 2, 0, 2])
    H = fin.parse_mask(C4, ["0", "2"])
    assert fin.con_mod(double, H) == C4.full_mask
    assert fin.con_minus_mod(double, H) == fin.parse_mask(C4, ["0"])


def test_restrict_and_quotient():
    C6 = fin.build_group("C6")
    inst = fin.FiniteInstance(C6, [5 * x % 6 for x in range(6)])
    H = fin.parse_mask(C6, ["0", "2", "4"])
    r, q = fin.restrict(inst, H), fin.quotient(inst, H)
    assert r.G.order == 3 and q.G.order == 2
    assert fin.is_endomorphism(r.G, r.alpha) and fin.is_endomorphism(q.G, q.alpha)


def test_parse_mask_rejects_unknown():
    with pytest.raises(ValueError):
        fin.parse_mask(fin.build_group("C2"), ["7"])


# -- properties --------------------------------------------------------------------------

INSTANCES = fin.catalog_instances(["C4", "C6", "C2xC2", "S3", "D4", "Q8", "C2xC4"])


@st.composite
def instance_and_subgroup(draw):
    inst = draw(st.sampled_from(INSTANCES))
    U = draw(st.sampled_from(fin.all_subgroups(inst.G)))
    return inst, U


@settings(max_examples=300, deadline=None)
@given(instance_and_subgroup())
def test_stage_laws(pair):
    inst, U = pair
    stages = minus_stages(inst, U, inst.G.order + 1)
    for a, b in zip(stages, stages[1:]):
        assert b & ~a == 0
    Um = stages[-1]
    assert Um == inst.minus_part(U)
    assert inst.image(Um) & ~Um == 0
    Up = plus_stage(inst, U, inst.G.order + 1)
    assert Up == inst.plus_part(U)
    assert Up & ~inst.image(Up) == 0


@settings(max_examples=300, deadline=None)
@given(instance_and_subgroup())
def test_tidy_above_stage_is_certified(pair):
    inst, U = pair
    V, ell = tidy_above(inst, U)
    assert inst.tidy_above_certificate(V)
    assert ell <= inst.G.order
    # the certificate is exactly the product decomposition
    assert inst.G.product_set(inst.plus_part(V), inst.minus_part(V)) == V


@settings(max_examples=200, deadline=None)
@given(instance_and_subgroup())
def test_index_multiplicative(pair):
    inst, U = pair
    G = inst.G
    e = inst.trivial()
    assert inst.index(G.full_mask, e) == inst.index(G.full_mask, U) * inst.index(U, e)
