from fractions import Fraction

import pytest

from tidyscale import core
from tidyscale import finite as fin
from tidyscale.padic import backend as pb
from tidyscale.padic.lattice import Lattice


def test_scale_result_checks_certificate():
    with pytest.raises(ValueError):
        core.ScaleResult(0, None, 0, "exhaustive")
    with pytest.raises(ValueError):
        core.ScaleResult(3, None, 2, "exhaustive")
    r = core.ScaleResult(4, None, 4, "newton-polygon", (("k", 1),))
    assert r.detail("k") == 1 and r.detail("missing", 7) == 7


def test_stage_trace_stabilization():
    t = core.StageTrace(tuple(core.StageRecord(k, None, i) for k, i in enumerate([9, 3, 3, 3])))
    assert t.indices() == [9, 3, 3, 3]
    assert t.stabilized_from() == 1


def test_minus_trace_reaches_scale():
    p = 3
    inst = pb.PadicInstance(p, [[Fraction(1, p), 1], [0, p]])
    U = Lattice.span(p, 2, [[1, 0], [0, p**4]])
    trace = core.minus_trace(inst, U, 12)
    idx = trace.indices()
    assert idx == sorted(idx, reverse=True)
    assert idx[-1] == inst.scale_result().value == p


def test_stage_argument_validation():
    inst = fin.catalog_instances(["C2"])[0]
    with pytest.raises(ValueError):
        core.minus_stage(inst, inst.whole(), -1)
    with pytest.raises(ValueError):
        core.plus_stage(inst, inst.whole(), -1)


class _NeverTidy(fin.FiniteInstance):
    def tidy_above_certificate(self, V):
        return False


def test_stage_budget_is_enforced():
    G = fin.build_group("C2")
    inst = _NeverTidy(G, [0, 1])
    with pytest.raises(core.StageBudgetExceeded) as err:
        core.tidy_above(inst, inst.whole(), l_max=3)
    assert err.value.l_max == 3
    assert isinstance(err.value, core.TidyError)


def test_is_tidy_verdict():
    G = fin.build_group("C2xC2")
    swap = fin.FiniteInstance(G, [0, 2, 1, 3])
    U = fin.parse_mask(G, ["(0,0)", "(0,1)"])
    v = core.is_tidy(swap, U)
    assert not v and (v.displacement, v.scale) == (2, 1)
    assert core.is_tidy(swap, swap.whole())


def test_index_is_multiplicative_on_lattices():
    p = 2
    inst = pb.PadicInstance(p, [[1, 0], [0, 1]])
    K = Lattice.standard(p, 2)
    M = Lattice.span(p, 2, [[1, 0], [0, 2]])
    H = Lattice.span(p, 2, [[2, 0], [0, 8]])
    assert core.index_is_multiplicative(inst, K, M, H)
    assert core.index(inst, K, H) == 16


def test_decomposition_items_order():
    inst = fin.catalog_instances(["C3"])[0]
    names = [n for n, _ in core.decompose(inst).items()]
    assert names == list(core.DECOMPOSITION_FIELDS)


def test_generic_wrappers_delegate():
    inst = fin.catalog_instances(["C4"])[1]
    assert core.scale(inst).value == 1
    assert core.core_part(inst, inst.whole()) == inst.eventual_image
    assert core.tidying_procedure(inst, inst.whole()) == inst.tidying_procedure(inst.whole())
