import itertools

import pytest

from tidyscale import shift as sh
from tidyscale.core import NotASubgroup, displacement_index, tidy_above


@pytest.fixture(params=[("C2", "N"), ("C2", "Z"), ("C3", "N"), ("C3", "Z")], ids=lambda x: "/".join(x))
def inst(request):
    return sh.shift_instance(*request.param)


def test_cylinder_index():
    one = sh.shift_instance("C3", "N")
    assert sh.windowed_index(one, one.whole(), one.cylinder(1, 1)) == 3
    assert sh.windowed_index(one, one.whole(), one.cylinder(1, 3)) == 27
    assert sh.windowed_index(one, one.cylinder(1, 1), one.cylinder(1, 2)) == 3


def test_image_drops_first_coordinate_on_N():
    one = sh.shift_instance("C3", "N")
    assert one.image(one.cylinder(1, 2)) == one.cylinder(1, 1)
    assert one.image(one.cylinder(1, 1)) == one.whole()
    assert one.preimage(one.cylinder(1, 1)) == one.cylinder(2, 2)


def test_image_moves_window_on_Z():
    two = sh.shift_instance("C2", "Z")
    U = two.cylinder(-1, -1)
    assert two.image(U) == two.cylinder(-2, -2)
    assert two.preimage(U) == two.cylinder(0, 0)


def test_displacement_of_one_coordinate_cylinder():
    two = sh.shift_instance("C2", "Z")
    U = two.cylinder(-1, -1)
    assert displacement_index(two, U) == 2
    V, ell = tidy_above(two, U)
    assert (V, ell) == (U, 0)


def test_only_the_whole_group_is_tidy(inst):
    tidy = sh.tidy_windowed_subgroups(inst, 3)
    assert tidy == [inst.whole()]
    assert all(displacement_index(inst, U) >= 1 for U in sh.windowed_subgroups(inst, 3))


def brute_window_subgroups(F, w):
    pats = list(itertools.product(range(F.order), repeat=w))
    mul = lambda a, b: tuple(F.table[x][y] for x, y in zip(a, b))
    e = tuple([F.identity] * w)
    out = 0
    for bits in range(1, 1 << len(pats)):
        S = [pats[i] for i in range(len(pats)) if bits >> i & 1]
        if e in S and all(mul(a, b) in S for a in S for b in S):
            out += 1
    return out


@pytest.mark.parametrize("w", [1, 2])
def test_window_subgroup_enumeration(w):
    one = sh.shift_instance("C2", "N")
    F = one.F
    # subgroups of F^w, counted independently
    assert len(sh._window_subgroups(F, w)) == brute_window_subgroups(F, w)


def test_scale_is_compact_trivial(inst):
    res = inst.scale_result()
    assert res.value == 1 and res.method == "compact-trivial"
    assert res.subgroup == inst.whole()


def test_one_sided_decomposition():
    one = sh.shift_instance("C2", "N")
    d = dict(one.decompose().items())
    assert d["con"].payload == "finitely-supported" and d["con"].closed is False
    for name in ("con_minus", "nub", "bik", "par", "par_minus", "lev"):
        assert d[name].payload == "whole"


def test_two_sided_decomposition():
    two = sh.shift_instance("C2", "Z")
    d = dict(two.decompose().items())
    assert d["con"].payload == "support-bounded-above"
    assert d["con_minus"].payload == "support-bounded-below"
    assert not d["nub"].computed


def test_bik_is_dense_in_windows():
    one = sh.shift_instance("C2", "N")
    ev = sh.bik_density_evidence(one, 5)
    assert ev == {w: True for w in range(1, 6)}


def test_window_projection_of_con():
    one = sh.shift_instance("C2", "N")
    con = one.decompose().con
    assert sh.window_projection(one, con, 1, 2) == frozenset(itertools.product(range(2), repeat=2))


def test_entropy_exponent_is_not_the_scale():
    one = sh.shift_instance("C3", "N")
    assert sh.topological_entropy_exponent(one) == 3
    assert one.scale_result().value == 1


def test_parse_windowed():
    one = sh.shift_instance("C2", "N")
    U = sh.parse_windowed(one, {"window": [1, 2], "constraint": [["0", "0"], ["1", "1"]]})
    assert sh.windowed_index(one, one.whole(), U) == 2
    assert sh.parse_windowed(one, "G") == one.whole()
    assert sh.windowed_index(one, one.whole(), sh.parse_windowed(one, {"window": [1, 2], "constraint": [["0", "0"], ["1", "0"]]})) == 2
    with pytest.raises(NotASubgroup):
        sh.parse_windowed(one, {"window": [1, 2], "constraint": [["0", "0"], ["1", "0"], ["1", "1"]]})


def test_one_sided_windows_start_at_one():
    one = sh.shift_instance("C2", "N")
    with pytest.raises(ValueError):
        one.cylinder(0, 1)


def test_finite_support_orbits_converge(inst):
    cfg = sh.config_from([1, 0, 1], 1)
    assert inst.converges_mod(("orbit", cfg), "trivial")
