"""Executable checks of the structure theorems over generated instances.

Each check returns :class:`VerificationReport` records. A failed hypothesis is a
skip with a reason from :class:`SkipReason`, never a failure; a failure always
carries a counterexample payload.
"""

from __future__ import annotations

import enum
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Sequence

from . import finite as fin
from . import shift as sh
from .core import (
    GroupInstance,
    NotComputableError,
    TidyError,
    displacement_index,
    minus_stage,
    tidy_above,
)
from .padic import backend as pb
from .padic.arith import det, diag, inverse, matvec, rational_row_basis, valuation
from .padic.lattice import Lattice, image, intersect, meet_coordinates, meet_subspace, preimage_meet
from .padic.subspace import PadicSubspace, PrecisionError

TAGS = (
    "A",
    "B",
    "C.a",
    "C.b",
    "C.c",
    "D",
    "E",
    "fi-steps",
    "F.a",
    "F.b",
    "F.c",
    "F.d",
    "F.e",
    "F.f",
    "modVpVm",
    "when-TB",
    "keynub",
    "good-prepar",
    "parblev",
    "entropy-addition",
)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


class SkipReason(str, enum.Enum):
    PRECONDITION = "precondition-violated"
    NOT_COMPUTED = "descriptor-not-computed"
    NO_SMALL_TIDY = "no-small-tidy-subgroups"
    CON_NOT_CLOSED = "con-not-closed"
    NOT_MATERIALIZABLE = "not-materializable"
    UNCERTIFIED = "precision-uncertified"


@dataclass
class VerificationReport:
    theorem: str
    instance: str
    status: str
    reason: SkipReason | None = None
    subgroup: Any = None
    counterexample: Any = None
    detail: dict = field(default_factory=dict)
    timing: float = 0.0

    def __post_init__(self):
        if self.status == FAIL and self.counterexample is None:
            raise ValueError("a failure needs a counterexample")
        if self.status == SKIPPED and self.reason is None:
            raise ValueError("a skip needs a reason")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        # timing is left out so that reports are byte-reproducible
        return {
            "theorem": self.theorem,
            "instance": self.instance,
            "status": self.status,
            "reason": self.reason.value if self.reason else None,
            "subgroup": self.subgroup,
            "counterexample": self.counterexample,
            "detail": self.detail,
        }


def _ok(tag, inst, cond: bool, cex=None, sub=None, **detail) -> VerificationReport:
    if cond:
        return VerificationReport(tag, inst.key(), PASS, subgroup=sub, detail=detail)
    return VerificationReport(tag, inst.key(), FAIL, subgroup=sub, counterexample=cex if cex is not None else detail, detail=detail)


def _skip(tag, inst, reason: SkipReason, note: str = "", sub=None) -> VerificationReport:
    return VerificationReport(tag, inst.key(), SKIPPED, reason, subgroup=sub, detail={"note": note} if note else {})


def _rows(rows) -> list[list[str]]:
    return [[str(Fraction(x)) for x in r] for r in rows]


def _key_rows(rows) -> tuple:
    return tuple(tuple(r) for r in rational_row_basis(rows))


# ============================================================================
# finite groups
# ============================================================================


def _fset(inst: fin.FiniteInstance, mask: int) -> list[str]:
    return inst.G.describe_mask(mask)


def finite_A(inst: fin.FiniteInstance, H: int) -> VerificationReport:
    sub = _fset(inst, H)
    if inst.image(H) & ~H:
        return _skip("A", inst, SkipReason.PRECONDITION, "α(H) is not contained in H", sub)
    lhs = fin.con_mod(inst, H)
    rhs = inst.G.product_set(inst.eventual_kernel, H)
    cex = None
    if lhs != rhs:
        x = (lhs ^ rhs).bit_length() - 1
        cex = {"element": inst.G.labels[x], "in_con_mod_H": bool(lhs >> x & 1), "in_con_times_H": bool(rhs >> x & 1)}
    return _ok("A", inst, lhs == rhs, cex, sub, con_mod_H=_fset(inst, lhs), con_times_H=_fset(inst, rhs))


def finite_B(inst: fin.FiniteInstance, H: int) -> VerificationReport:
    """con⁻(α,H) against con⁻(α)H, plus the matching-trajectory claim."""
    sub = _fset(inst, H)
    if inst.image(H) & ~H:
        return _skip("B", inst, SkipReason.PRECONDITION, "α(H) is not contained in H", sub)
    G = inst.G
    lhs = fin.con_minus_mod(inst, H)
    con_minus = fin.con_minus_mod(inst, inst.trivial())
    rhs = G.product_set(con_minus, H)
    unmatched = []
    for x in G.elements(lhs):
        traj = fin.regressive_search(inst, x, H)
        if fin.match_trajectory(inst, traj, H) is None:
            unmatched.append(G.labels[x])
    detail = {
        "con_minus_mod_H": _fset(inst, lhs),
        "con_minus_times_H": _fset(inst, rhs),
        "left_in_right": lhs & ~rhs == 0,
        "right_in_left": rhs & ~lhs == 0,
        "unmatched_trajectories": unmatched,
    }
    if lhs == rhs and not unmatched:
        return _ok("B", inst, True, sub=sub, **detail)
    cex: dict = {"unmatched_trajectories": unmatched}
    if rhs & ~lhs:
        x = G.elements(rhs & ~lhs)[0]
        cex.update(
            element=G.labels[x],
            why="element of con⁻(α)H with no regressive trajectory converging modulo H",
            alpha_H_equals_H=inst.image(H) == H,
        )
    elif lhs & ~rhs:
        x = G.elements(lhs & ~rhs)[0]
        cex.update(element=G.labels[x], why="element of con⁻(α,H) outside con⁻(α)H")
    return _ok("B", inst, False, cex, sub, **detail)


def _finite_scale(inst: fin.FiniteInstance) -> int:
    return fin.exhaustive_scale(inst)[0]


def finite_C(inst: fin.FiniteInstance, H: int) -> list[VerificationReport]:
    G = inst.G
    sub = _fset(inst, H)
    if inst.image(H) & ~H:
        return [_skip(t, inst, SkipReason.PRECONDITION, "α(H) is not contained in H", sub) for t in ("C.a", "C.b", "C.c")]
    out = []
    sG = _finite_scale(inst)
    rH = fin.restrict(inst, H)
    sH = _finite_scale(rH)
    # a subgroup tidy for α whose trace on H is tidy for α|H
    pair = None
    for U in fin.all_subgroups(G):
        if displacement_index(inst, U) == sG:
            pos = {x: i for i, x in enumerate(G.elements(H))}
            V = rH.G.mask_of(pos[x] for x in G.elements(U & H))
            if displacement_index(rH, V) == sH:
                pair = U
                break
    out.append(_ok("C.a", inst, sH <= sG and pair is not None, {"s_H": sH, "s_G": sG, "tidy_pair": pair is not None}, sub, s_H=sH, s_G=sG, tidy_pair=_fset(inst, pair) if pair is not None else None))
    if not G.is_normal(H):
        out.append(_skip("C.b", inst, SkipReason.PRECONDITION, "H is not normal", sub))
        out.append(_skip("C.c", inst, SkipReason.PRECONDITION, "H is not normal", sub))
        return out
    sQ = _finite_scale(fin.quotient(inst, H))
    out.append(_ok("C.b", inst, sG % (sH * sQ) == 0, {"s_H": sH, "s_Q": sQ, "s_G": sG}, sub, s_H=sH, s_Q=sQ, s_G=sG))
    if inst.image(H) != H or H & ~inst.eventual_image:
        out.append(_skip("C.c", inst, SkipReason.PRECONDITION, "needs α(H) = H and H inside par⁻", sub))
    else:
        out.append(_ok("C.c", inst, sG == sH * sQ, {"s_H": sH, "s_Q": sQ, "s_G": sG}, sub, s_H=sH, s_Q=sQ, s_G=sG))
    return out


def finite_D(inst: fin.FiniteInstance) -> VerificationReport:
    nub = fin.nub_literal(inst)
    nub_trivial = nub == inst.trivial()
    con = inst.eventual_kernel
    con_closed = True  # every subset of a discrete group is closed
    # also: {e} tidy iff nub trivial, and tidy-above forces tidy
    small = displacement_index(inst, inst.trivial()) == 1
    every_tb_tidy = all(
        displacement_index(inst, V) == 1 for V in fin.all_subgroups(inst.G) if inst.tidy_above_certificate(V)
    )
    ok = nub_trivial == con_closed and small == nub_trivial and every_tb_tidy == nub_trivial
    return _ok(
        "D", inst, ok, {"nub": _fset(inst, nub), "con": _fset(inst, con)},
        nub_trivial=nub_trivial, con_closed=con_closed, small_tidy=small, tidy_above_implies_tidy=every_tb_tidy,
    )


def finite_E(inst: fin.FiniteInstance) -> list[VerificationReport]:
    sG = _finite_scale(inst)
    d = inst.decompose()
    sC = _finite_scale(fin.restrict(inst, d.con_minus.payload))
    sP = _finite_scale(fin.restrict(inst, d.par_minus.payload))
    return [
        _ok("E", inst, sG == sC, {"s": sG, "s_con_minus": sC}, s=sG, s_con_minus=sC),
        _ok("fi-steps", inst, sG == sP, {"s": sG, "s_par_minus": sP}, s=sG, s_par_minus=sP),
    ]


def _chart_finite(inst: fin.FiniteInstance, V: int, con: int, lev: int, conm: int) -> bool:
    G = inst.G
    prod = G.product_set(G.product_set(con & V, lev & V), conm & V)
    return (
        prod == V
        and inst.image(con & V) & ~(con & V) == 0
        and inst.image(lev & V) == lev & V
        and (conm & V) & ~inst.image(conm & V) == 0
    )


def finite_F(inst: fin.FiniteInstance) -> list[VerificationReport]:
    G = inst.G
    d = inst.decompose()
    con, lev, conm = d.con.payload, d.lev.payload, d.con_minus.payload
    par, parm = d.par.payload, d.par_minus.payload
    e = inst.trivial()
    out = []
    # (a) the product map con × lev × con⁻ -> Ω is a bijection
    t = G.table
    images = [t[t[x][y]][z] for x in G.elements(con) for y in G.elements(lev) for z in G.elements(conm)]
    omega = G.mask_of(images)
    out.append(_ok("F.a", inst, len(set(images)) == len(images) and inst.image(omega) & ~omega == 0, {"omega": _fset(inst, omega)}, omega_size=bin(omega).count("1"), product_injective=len(set(images)) == len(images)))
    # (b) par = con ⋊ lev and par⁻ = con⁻ ⋊ lev
    b1 = G.is_normal(con) and con & lev == e and G.product_set(con, lev) == par
    b2 = conm & lev == e and G.product_set(conm, lev) == parm and all(
        G.mask_of(t[t[g][h]][G.inverses[g]] for h in G.elements(conm)) == conm for g in G.elements(parm)
    )
    out.append(_ok("F.b", inst, b1 and b2, {"par": _fset(inst, par), "par_minus": _fset(inst, parm)}, par_semidirect=b1, par_minus_semidirect=b2))
    # (c) α is bijective on par⁻, lev and con⁻
    bij = {name: inst.image(M) == M for name, M in (("par_minus", parm), ("lev", lev), ("con_minus", conm))}
    out.append(_ok("F.c", inst, all(bij.values()), bij, **bij))
    # (d), (e) over every subgroup
    bad_d, bad_e = None, None
    for V in fin.all_subgroups(G):
        tidy = displacement_index(inst, V) == 1
        if tidy and bad_d is None:
            Vm, Vp = inst.minus_part(V), inst.plus_part(V)
            if not (
                V & ~omega == 0
                and Vm == G.product_set(con & V, lev & V)
                and Vp == G.product_set(conm & V, lev & V)
            ):
                bad_d = V
        if tidy != _chart_finite(inst, V, con, lev, conm) and bad_e is None:
            bad_e = V
    out.append(_ok("F.d", inst, bad_d is None, {"subgroup": _fset(inst, bad_d)} if bad_d is not None else None))
    out.append(_ok("F.e", inst, bad_e is None, {"subgroup": _fset(inst, bad_e)} if bad_e is not None else None))
    # (f) α-stable subgroups of lev form a neighbourhood basis; in a discrete group {e} is one
    out.append(_ok("F.f", inst, inst.image(e) == e and e & ~lev == 0, {"W": _fset(inst, e)}, W=_fset(inst, e)))
    return out


def _has_trajectory_within(inst: fin.FiniteInstance, x: int, K: int) -> bool:
    """Independent test for x ∈ K_+: a backward path inside K reaching an α-cycle inside K."""
    G = inst.G
    n = G.order
    preds: dict[int, list[int]] = {}
    for y in G.elements(K):
        preds.setdefault(inst.alpha[y], []).append(y)
    seen = {x}
    stack = [x]
    while stack:
        u = stack.pop()
        # u periodic with its cycle inside K?
        y, ok = inst.alpha[u], K >> inst.alpha[u] & 1
        for _ in range(n):
            if y == u or not ok:
                break
            y = inst.alpha[y]
            ok = K >> y & 1
        if ok and y == u:
            return True
        for v in preds.get(u, []):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return False


def finite_lemmas(inst: fin.FiniteInstance) -> list[VerificationReport]:
    G = inst.G
    out = []
    subs = fin.all_subgroups(G)
    # modVpVm on every subgroup
    bad = None
    for V in subs:
        W = inst.plus_part(V) & inst.minus_part(V)
        if inst.minus_minus(V) != fin.con_mod(inst, W) or inst.plus_plus(V) != fin.con_minus_mod(inst, W):
            bad = V
            break
    out.append(_ok("modVpVm", inst, bad is None, {"subgroup": _fset(inst, bad)} if bad is not None else None, subgroups=len(subs)))
    # when-TB: a tidy-above subgroup is tidy iff it contains the nub
    nub = fin.nub_literal(inst)
    bad = next(
        (V for V in subs if inst.tidy_above_certificate(V) and (displacement_index(inst, V) == 1) != (nub & ~V == 0)),
        None,
    )
    out.append(_ok("when-TB", inst, bad is None, {"subgroup": _fset(inst, bad)} if bad is not None else None))
    # keynub (d) closure(con) = con·nub and (e) nub = closure(con ∩ lev)
    d = inst.decompose()
    con, lev = d.con.payload, d.lev.payload
    kd = con == G.product_set(con, nub)
    ke = nub == con & lev
    out.append(_ok("keynub", inst, kd and ke, {"nub": _fset(inst, nub)}, part_d=kd, part_e=ke))
    # good-prepar on every subgroup, with independent characterizations
    bad = None
    for K in subs:
        Km, Kp = inst.minus_part(K), inst.plus_part(K)
        Km_char = G.mask_of(x for x in G.elements(K) if all(K >> inst.apply(x, k) & 1 for k in range(G.order + 1)))
        Kp_char = G.mask_of(x for x in G.elements(K) if _has_trajectory_within(inst, x, K))
        if not (
            Km == Km_char
            and Kp == Kp_char
            and inst.image(Km) & ~Km == 0
            and Kp & ~inst.image(Kp) == 0
            and inst.image(Kp & Km) == Kp & Km
        ):
            bad = K
            break
    out.append(_ok("good-prepar", inst, bad is None, {"subgroup": _fset(inst, bad)} if bad is not None else None))
    # parblev (f): for α on lev, V tidy iff α(V) = V
    rl = fin.restrict(inst, lev)
    s_lev = _finite_scale(rl)
    bad = next(
        (V for V in fin.all_subgroups(rl.G) if (displacement_index(rl, V) == s_lev) != (rl.image(V) == V)),
        None,
    )
    out.append(_ok("parblev", inst, bad is None, {"subgroup": rl.G.describe_mask(bad)} if bad is not None else None))
    return out


def finite_entropy(inst: fin.FiniteInstance, H: int) -> VerificationReport:
    sub = _fset(inst, H)
    if inst.image(H) & ~H or not inst.G.is_normal(H):
        return _skip("entropy-addition", inst, SkipReason.PRECONDITION, "H must be normal and α-invariant", sub)
    sG = _finite_scale(inst)
    sH = _finite_scale(fin.restrict(inst, H))
    sQ = _finite_scale(fin.quotient(inst, H))
    return _ok("entropy-addition", inst, sG == sH * sQ, {"s_G": sG, "s_H": sH, "s_Q": sQ}, sub, s_G=sG, s_H=sH, s_Q=sQ)


def finite_checks(inst: fin.FiniteInstance, tags: set[str]) -> list[VerificationReport]:
    out: list[VerificationReport] = []
    Hs = fin.invariant_subgroups(inst)
    for H in Hs:
        if "A" in tags:
            out.append(finite_A(inst, H))
        if "B" in tags:
            out.append(finite_B(inst, H))
        if tags & {"C.a", "C.b", "C.c"}:
            out.extend(r for r in finite_C(inst, H) if r.theorem in tags)
        if "entropy-addition" in tags and inst.G.is_normal(H):
            out.append(finite_entropy(inst, H))
    if "D" in tags:
        out.append(finite_D(inst))
    if tags & {"E", "fi-steps"}:
        out.extend(r for r in finite_E(inst) if r.theorem in tags)
    if any(t.startswith("F.") for t in tags):
        out.extend(r for r in finite_F(inst) if r.theorem in tags)
    if tags & {"modVpVm", "when-TB", "keynub", "good-prepar", "parblev"}:
        out.extend(r for r in finite_lemmas(inst) if r.theorem in tags)
    return out


# ============================================================================
# p-adic vector groups
# ============================================================================


def padic_subgroups(inst: pb.PadicInstance) -> list[tuple[tuple[Fraction, ...], ...]]:
    """Rational A-invariant subspaces used as H: invariant coordinate subspaces,
    eventual kernel and image, and the exact slope blocks."""
    n = inst.n
    cands = []
    for mask in range(1, 2**n - 1):
        cands.append([[Fraction(int(i == j)) for i in range(n)] for j in range(n) if mask >> j & 1])
    cands.append(pb.eventual_kernel(inst.A))
    cands.append(pb.eventual_image(inst.A))
    split = inst.split()
    if split.certified:
        for name in ("less", "equal", "greater"):
            rows = split.exact_basis(name)
            if rows:
                cands.append([list(r) for r in rows])
    seen, out = set(), []
    for c in cands:
        if not c:
            continue
        k = _key_rows(c)
        if 0 < len(k) < n and k not in seen and pb.is_invariant_subspace(inst.A, k):
            seen.add(k)
            out.append(k)
    return sorted(out, key=lambda k: (len(k), [[str(x) for x in r] for r in k]))


def _primitive(v: Sequence, p: int) -> list[Fraction]:
    vals = [valuation(x, p) for x in v if Fraction(x) != 0]
    if not vals:
        return [Fraction(0)] * len(v)
    f = Fraction(p) ** min(vals)
    return [Fraction(x) / f for x in v]


class _Space:
    """A subspace of Q_p^n known exactly (rational rows) or to finite precision."""

    def __init__(self, p, n, exact=None, approx: PadicSubspace | None = None):
        self.p, self.n = p, n
        self.exact = None if exact is None else _key_rows(exact) if exact else ()
        self.approx = approx

    @classmethod
    def of_block(cls, inst: pb.PadicInstance, split: pb.SlopeSplit, name: str) -> "_Space":
        rows = split.exact_basis(name) if name in ("less", "equal", "greater") else None
        return cls(inst.p, inst.n, rows, getattr(split, name))

    def padic(self, prec: int = 64) -> PadicSubspace:
        if self.exact is not None:
            return PadicSubspace.exact(self.p, self.n, self.exact, prec)
        assert self.approx is not None
        return self.approx

    @property
    def dim(self) -> int:
        return len(self.exact) if self.exact is not None else self.approx.rank  # type: ignore[union-attr]

    def plus(self, other: "_Space") -> "_Space":
        if self.exact is not None and other.exact is not None:
            return _Space(self.p, self.n, list(self.exact) + list(other.exact))
        return _Space(self.p, self.n, None, self.padic().plus(other.padic()))

    def same(self, other: "_Space") -> bool:
        if self.exact is not None and other.exact is not None:
            return self.exact == other.exact
        a, b = self.padic(), other.padic()
        return a.same_as(b)

    def contains_space(self, other: "_Space") -> bool:
        return self.plus(other).dim == self.dim and self.plus(other).same(self)

    def describe(self):
        if self.exact is not None:
            return {"exact": True, "basis": _rows(self.exact)}
        return {"exact": False, "precision": self.approx.prec, "basis": self.approx.describe()}  # type: ignore[union-attr]


def _lift(inst: pb.PadicInstance, sp: pb.SubspaceSplit, W: _Space) -> _Space:
    """q⁻¹(W) for W a subspace of the quotient by sp.H, in the original coordinates."""
    n, h = inst.n, len(sp.H)
    Hs = _Space(inst.p, n, [list(r) for r in sp.H])
    if W.dim == 0:
        return Hs
    def up(w):
        return list(matvec(sp.P, [Fraction(0)] * h + [Fraction(x) for x in w]))
    if W.exact is not None:
        return _Space(inst.p, n, [list(r) for r in sp.H] + [up(w) for w in W.exact])
    # approximate quotient block: lift residues, then add H; P loses its denominators' worth of digits
    Pv = [valuation(x, inst.p) for r in sp.P for x in r if x != 0]
    loss = max([0] + [-v for v in Pv])
    prec = W.approx.prec - loss  # type: ignore[union-attr]
    if prec <= 2:
        raise PrecisionError("quotient block too imprecise to lift")
    vecs = [_primitive(up(w), inst.p) for w in W.approx.vectors()]  # type: ignore[union-attr]
    vecs += [_primitive(r, inst.p) for r in sp.H]
    return _Space(inst.p, n, None, PadicSubspace.from_vectors(inst.p, n, vecs, prec, h + W.dim))


def _quotient_block(inst: pb.PadicInstance, sp: pb.SubspaceSplit, name: str) -> _Space:
    q = pb.PadicInstance(inst.p, sp.A_Q)
    if q.n == 0:
        return _Space(inst.p, 0, [])
    qs = q.split()
    if not qs.certified:
        raise NotComputableError("quotient slope split not certified")
    return _Space.of_block(q, qs, name)


def padic_A(inst: pb.PadicInstance, H) -> VerificationReport:
    sub = _rows(H)
    if not pb.is_invariant_subspace(inst.A, H):
        return _skip("A", inst, SkipReason.PRECONDITION, "α(H) is not contained in H", sub)
    if len(rational_row_basis([list(matvec(inst.A, h)) for h in H])) != len(H):
        return _skip("A", inst, SkipReason.PRECONDITION, "needs α(H) = H for a non-compact H", sub)
    split = inst.split()
    if not split.certified:
        return _skip("A", inst, SkipReason.UNCERTIFIED, "slope split not certified", sub)
    sp = pb.split_by_subspace(inst.A, H)
    try:
        lhs = _lift(inst, sp, _quotient_block(inst, sp, "less"))  # con(α, H) = q⁻¹(con(ᾱ))
        rhs = _Space.of_block(inst, split, "less").plus(_Space(inst.p, inst.n, H))  # con(α)H
        same = lhs.dim == rhs.dim and lhs.same(rhs)
    except (PrecisionError, NotComputableError) as exc:
        return _skip("A", inst, SkipReason.UNCERTIFIED, str(exc), sub)
    # spot check with the exact orbit rule on the basis of con(α)H
    spot = None
    if rhs.exact is not None:
        spot = all(inst.converges_mod(("orbit", v), H) for v in rhs.exact)
    ok = same and spot is not False
    return _ok("A", inst, ok, {"con_mod_H": lhs.describe(), "con_times_H": rhs.describe(), "orbit_rule": spot}, sub, con_mod_H=lhs.describe(), con_times_H=rhs.describe(), orbit_rule=spot)


def padic_B(inst: pb.PadicInstance, H) -> VerificationReport:
    """con⁻(α,H) is computed from the eventual image: regressive trajectories live there,
    and inside it convergence modulo H is convergence modulo the stable part A^n(H)."""
    sub = _rows(H)
    if not pb.is_invariant_subspace(inst.A, H):
        return _skip("B", inst, SkipReason.PRECONDITION, "α(H) is not contained in H", sub)
    split = inst.split()
    if not split.certified:
        return _skip("B", inst, SkipReason.UNCERTIFIED, "slope split not certified", sub)
    Hst = pb.subspace_image(inst.A, H, inst.n)
    try:
        if Hst:
            sp = pb.split_by_subspace(inst.A, Hst)
            lhs = _lift(inst, sp, _quotient_block(inst, sp, "greater"))
        else:
            lhs = _Space.of_block(inst, split, "greater")
        rhs = _Space.of_block(inst, split, "greater").plus(_Space(inst.p, inst.n, H))
        same = lhs.dim == rhs.dim and lhs.same(rhs)
        inclusion = rhs.contains_space(lhs)
    except (PrecisionError, NotComputableError) as exc:
        return _skip("B", inst, SkipReason.UNCERTIFIED, str(exc), sub)
    detail = {"con_minus_mod_H": lhs.describe(), "con_minus_times_H": rhs.describe(), "left_in_right": inclusion}
    cex = None
    if not same:
        E = pb.eventual_image(inst.A)
        witness = next((h for h in H if len(rational_row_basis(E + [list(h)])) != len(E)), None)
        cex = {
            "element": [str(x) for x in witness] if witness is not None else None,
            "why": "element of H (so of con⁻(α)H) with no regressive trajectory at all",
            "alpha_H_equals_H": len(Hst) == len(H),
        }
    return _ok("B", inst, same, cex, sub, **detail)


def _padic_scale(inst: pb.PadicInstance) -> int:
    return inst.scale_result().value


def padic_C(inst: pb.PadicInstance, H) -> list[VerificationReport]:
    sub = _rows(H)
    if not pb.is_invariant_subspace(inst.A, H):
        return [_skip(t, inst, SkipReason.PRECONDITION, "H is not invariant", sub) for t in ("C.a", "C.b", "C.c")]
    sp = pb.split_by_subspace(inst.A, H)
    rH = pb.PadicInstance(inst.p, sp.A_H, "restriction")
    rQ = pb.PadicInstance(inst.p, sp.A_Q, "quotient")
    try:
        sG, sH, sQ = _padic_scale(inst), _padic_scale(rH), _padic_scale(rQ)
    except TidyError as exc:
        return [_skip(t, inst, SkipReason.UNCERTIFIED, str(exc), sub) for t in ("C.a", "C.b", "C.c")]
    # tidy U for α with U ∩ H tidy for α|H, searching down the minus stages of a tidy U
    h = len(H)
    Pinv = inverse(sp.P)
    U0 = inst.scale_result().subgroup
    found = None
    for N in range(0, pb.STAGE_BUDGET + 1):
        U = minus_stage(inst, U0, N)
        VH = meet_subspace(U, H)
        V = Lattice.span(inst.p, h, [list(matvec(Pinv, r))[:h] for r in VH.rows])
        if displacement_index(inst, U) == sG and displacement_index(rH, V) == sH:
            found = N
            break
    ca = sH <= sG and found is not None
    out = [_ok("C.a", inst, ca, {"s_H": sH, "s_G": sG, "tidy_pair_stage": found}, sub, s_H=sH, s_G=sG, tidy_pair_stage=found)]
    out.append(_ok("C.b", inst, sG % (sH * sQ) == 0, {"s_H": sH, "s_Q": sQ, "s_G": sG}, sub, s_H=sH, s_Q=sQ, s_G=sG))
    stable = len(pb.subspace_image(inst.A, H)) == h
    split = inst.split()
    in_parm = False
    if split.certified:
        parm = _Space.of_block(inst, split, "equal").plus(_Space.of_block(inst, split, "greater"))
        try:
            in_parm = parm.contains_space(_Space(inst.p, inst.n, H))
        except PrecisionError:
            in_parm = False
    if not (stable and in_parm):
        out.append(_skip("C.c", inst, SkipReason.PRECONDITION, "needs α(H) = H and H inside par⁻", sub))
    else:
        out.append(_ok("C.c", inst, sG == sH * sQ, {"s_H": sH, "s_Q": sQ, "s_G": sG}, sub, s_H=sH, s_Q=sQ, s_G=sG))
    return out


def _restricted(inst: pb.PadicInstance, rows) -> pb.PadicInstance:
    B = rational_row_basis([list(r) for r in rows])
    piv = [next(i for i, x in enumerate(b) if x != 0) for b in B]
    return pb.PadicInstance(inst.p, pb.restriction_matrix(inst.A, B, piv), "restriction")


def _block_scale(inst: pb.PadicInstance, split: pb.SlopeSplit, exact_rows, sub: PadicSubspace) -> tuple[int, str]:
    """Scale of α on an invariant block, from exact rows or from the p-adic approximation.

    With an approximate basis the restricted matrix is known to ``sub.prec``
    digits; its Newton polygon is trusted only when every vertex sits well
    below the noise level.
    """
    if exact_rows is not None:
        return (_padic_scale(_restricted(inst, exact_rows)) if exact_rows else 1), "exact"
    if sub.rank == 0:
        return 1, "exact"
    rows = [[Fraction(x) for x in r] for r in sub.rows]
    r = pb.PadicInstance(inst.p, pb.restriction_matrix(inst.A, rows, sub.pivots), "restriction")
    noise = sub.prec - inst.denominator_exponent * sub.rank
    top = max(v for _, v in r.polygon.vertices)
    if r.polygon.zero_roots or 2 * top >= noise:
        raise PrecisionError("restricted polygon too close to the precision floor")
    return r.newton_scale(), f"approximate ({sub.prec} digits)"


def padic_E(inst: pb.PadicInstance) -> list[VerificationReport]:
    split = inst.split()
    if not split.certified:
        return [_skip(t, inst, SkipReason.UNCERTIFIED, "slope split not certified") for t in ("E", "fi-steps")]
    s = _padic_scale(inst)
    out = []
    ex_g, ex_e = split.exact_basis("greater"), split.exact_basis("equal")
    parm_rows = None if ex_g is None or ex_e is None else list(ex_e) + list(ex_g)
    for tag, rows, sub, label in (
        ("E", ex_g, split.greater, "s_con_minus"),
        ("fi-steps", parm_rows, split.par_minus, "s_par_minus"),
    ):
        try:
            sr, how = _block_scale(inst, split, rows, sub)
        except PrecisionError as exc:
            out.append(_skip(tag, inst, SkipReason.UNCERTIFIED, str(exc)))
            continue
        out.append(_ok(tag, inst, s == sr, {"s": s, label: sr}, s=s, basis=how, **{label: sr}))
    return out


def _fix_minus(D, L: Lattice, limit: int = 10_000) -> Lattice:
    for _ in range(limit):
        nxt = preimage_meet(D, L, L)
        if nxt == L:
            return L
        L = nxt
    raise NotComputableError("minus part did not stabilize")


def _fix_plus(D, L: Lattice, limit: int = 10_000) -> Lattice:
    for _ in range(limit):
        nxt = intersect(L, image(D, L))
        if nxt == L:
            return L
        L = nxt
    raise NotComputableError("plus part did not stabilize")


def block_parts(bl: pb.Blocks, Ub: Lattice) -> tuple[Lattice, Lattice]:
    """(K_-, K_+) of a lattice in block coordinates.

    Points whose forward orbit stays bounded have no component in the expanding
    block, and points with a bounded regressive trajectory none in the
    contracting block; inside those coordinate subspaces the stages settle.
    """
    D = bl.block_diagonal()
    lo = bl.coords(0) + bl.coords(1)
    hi = bl.coords(1) + bl.coords(2)
    return _fix_minus(D, meet_coordinates(Ub, lo)), _fix_plus(D, meet_coordinates(Ub, hi))


def _sum(p, n, *Ls: Lattice) -> Lattice:
    return Lattice.span(p, n, [r for L in Ls for r in L.rows])


def padic_D(inst: pb.PadicInstance) -> VerificationReport:
    try:
        ad = pb.adapted_tidy_lattice(inst)
    except TidyError as exc:
        return _skip("D", inst, SkipReason.UNCERTIFIED, str(exc))
    s = ad.scale
    # small tidy subgroups: every p^k U of a tidy U stays tidy
    small = all(displacement_index(inst, ad.lattice.scaled(k)) == s for k in (1, 2, 3))
    con_closed = inst.decompose().con.closed is True  # a linear subspace
    nub_trivial = inst.decompose().nub.kind == "trivial"
    ok = nub_trivial == con_closed and small == nub_trivial
    return _ok("D", inst, ok, {"small_tidy": small, "con_closed": con_closed}, nub_trivial=nub_trivial, con_closed=con_closed, small_tidy=small)


def padic_F(inst: pb.PadicInstance) -> list[VerificationReport]:
    tags = ("F.a", "F.b", "F.c", "F.d", "F.e", "F.f")
    split = inst.split()
    if not split.certified:
        return [_skip(t, inst, SkipReason.UNCERTIFIED, "slope split not certified") for t in tags]
    p, n = inst.p, inst.n
    less, equal, greater = (_Space.of_block(inst, split, k) for k in ("less", "equal", "greater"))
    out = []
    try:
        total = less.plus(equal).plus(greater)
        fa = total.dim == n and less.dim + equal.dim + greater.dim == n
        out.append(_ok("F.a", inst, fa, {"dims": [less.dim, equal.dim, greater.dim]}, dims=[less.dim, equal.dim, greater.dim]))
        par = _Space(p, n, None, split.par)
        parm = _Space(p, n, None, split.par_minus)
        lev_meet = _Space(p, n, None, split.par.meet(split.par_minus, equal.dim))
        b = {
            "par_is_con_plus_lev": par.same(less.plus(equal)),
            "par_minus_is_con_minus_plus_lev": parm.same(equal.plus(greater)),
            "lev_is_par_meet_par_minus": lev_meet.same(equal),
            "con_meets_lev_trivially": less.plus(equal).dim == less.dim + equal.dim,
        }
        out.append(_ok("F.b", inst, all(b.values()), b, **b))
    except PrecisionError as exc:
        out += [_skip(t, inst, SkipReason.UNCERTIFIED, str(exc)) for t in ("F.a", "F.b")]
    try:
        bl = pb.blocks_for(inst)
    except TidyError as exc:
        return out + [_skip(t, inst, SkipReason.UNCERTIFIED, str(exc)) for t in tags[2:]]
    Cl, Ce, Cg = bl.C
    c = {
        "lev_automorphism": (not Ce) or valuation(det(Ce), p) == 0,
        "con_minus_automorphism": (not Cg) or det(Cg) != 0,
        "par_minus_automorphism": ((not Ce) or det(Ce) != 0) and ((not Cg) or det(Cg) != 0),
    }
    out.append(_ok("F.c", inst, all(c.values()), c, **c))
    # (d): tidy lattices split into con, lev, con⁻ parts as predicted
    try:
        ad = pb.adapted_tidy_lattice(inst)
        lattices = [("adapted", ad.lattice)] + [
            (f"stage-{k}", minus_stage(inst, inst.whole(), k)) for k in (0, 1, 2, 4)
        ]
        s = ad.scale
        bad_d = bad_e = None
        checked = 0
        for name, U in lattices:
            tidy = displacement_index(inst, U) == s
            chart = pb.chart_check(inst, U)
            if tidy != chart.ok and bad_e is None:
                bad_e = {"lattice": name, "tidy": tidy, "chart": chart.ok}
            if tidy:
                checked += 1
                Ub = bl.to_block(U)
                Km, Kp = block_parts(bl, Ub)
                parts = [meet_coordinates(Ub, bl.coords(w)) for w in range(3)]
                ok = Km == _sum(p, n, parts[0], parts[1]) and Kp == _sum(p, n, parts[1], parts[2])
                if not ok and bad_d is None:
                    bad_d = {"lattice": name}
        out.append(_ok("F.d", inst, bad_d is None, bad_d, tidy_lattices=checked))
        out.append(_ok("F.e", inst, bad_e is None, bad_e, lattices=len(lattices)))
    except TidyError as exc:
        out += [_skip(t, inst, SkipReason.UNCERTIFIED, str(exc)) for t in ("F.d", "F.e")]
    # (f): α-stable lattices in lev as small as we like: p^k times the Z_p[C]-span
    k = bl.sizes[1]
    if k == 0:
        out.append(_ok("F.f", inst, True, note="lev is trivial"))
    else:
        W = Lattice.span(p, k, pb._module_span(Ce, k))
        stable = all(image(Ce, W.scaled(j)) == W.scaled(j) for j in (0, 1, 2, 3))
        out.append(_ok("F.f", inst, stable, {"lev_block_lattice": W.describe()}, scales_checked=[0, 1, 2, 3]))
    return out


def padic_lemmas(inst: pb.PadicInstance) -> list[VerificationReport]:
    out = []
    out.append(_skip("modVpVm", inst, SkipReason.NOT_MATERIALIZABLE, "V_-- and V_++ are infinite unions of lattices"))
    try:
        s = _padic_scale(inst)
        # when-TB: nub is trivial, so each tidy-above stage must already be tidy
        bad = None
        for U0 in (inst.whole(), inst.whole().scaled(1)):
            V, ell = tidy_above(inst, U0, pb.STAGE_BUDGET)
            if displacement_index(inst, V) != s or not pb.chart_check(inst, V).ok:
                bad = {"stage": ell}
        out.append(_ok("when-TB", inst, bad is None, bad))
    except TidyError as exc:
        out.append(_skip("when-TB", inst, SkipReason.UNCERTIFIED, str(exc)))
    d = inst.decompose()
    # keynub: con is closed and nub is trivial, and con ∩ lev = 0
    split = inst.split()
    if split.certified:
        less, equal = _Space.of_block(inst, split, "less"), _Space.of_block(inst, split, "equal")
        try:
            meet0 = less.plus(equal).dim == less.dim + equal.dim
        except PrecisionError:
            meet0 = None
        if meet0 is None:
            out.append(_skip("keynub", inst, SkipReason.UNCERTIFIED))
        else:
            out.append(_ok("keynub", inst, meet0 and d.nub.kind == "trivial" and d.con.closed is True, {"con_meets_lev": not meet0}))
    else:
        out.append(_skip("keynub", inst, SkipReason.UNCERTIFIED))
    # good-prepar on the adapted lattice and on Z_p^n
    try:
        bl = pb.blocks_for(inst)
        D = bl.block_diagonal()
        bad = None
        for name, K in (("adapted", pb.adapted_tidy_lattice(inst).lattice), ("standard", inst.whole())):
            Km, Kp = block_parts(bl, bl.to_block(K))
            core = intersect(Km, Kp)
            if not (Km.contains(image(D, Km)) and image(D, Kp).contains(Kp) and image(D, core) == core):
                bad = {"lattice": name}
        out.append(_ok("good-prepar", inst, bad is None, bad))
    except TidyError as exc:
        out.append(_skip("good-prepar", inst, SkipReason.UNCERTIFIED, str(exc)))
    # parblev (f): on lev, a lattice is tidy iff it is α-stable
    try:
        bl = pb.blocks_for(inst)
        k = bl.sizes[1]
        if k == 0:
            out.append(_ok("parblev", inst, True, note="lev is trivial"))
        else:
            lev = pb.PadicInstance(inst.p, bl.C[1], "lev")
            s_lev = _padic_scale(lev)
            cands = [Lattice.standard(inst.p, k), Lattice.span(inst.p, k, pb._module_span(bl.C[1], k))]
            cands.append(Lattice.span(inst.p, k, [[Fraction(1)] + [Fraction(0)] * (k - 1)] + [[Fraction(inst.p) ** 2 * int(i == j) for j in range(k)] for i in range(k)]))
            bad = next(
                (L.describe() for L in cands if (displacement_index(lev, L) == s_lev) != (image(lev.A, L) == L)),
                None,
            )
            out.append(_ok("parblev", inst, bad is None, {"lattice": bad}, candidates=len(cands)))
    except TidyError as exc:
        out.append(_skip("parblev", inst, SkipReason.UNCERTIFIED, str(exc)))
    return out


def padic_entropy(inst: pb.PadicInstance, H) -> VerificationReport:
    sub = _rows(H)
    sp = pb.split_by_subspace(inst.A, H)
    sG = _padic_scale(inst)
    sH = _padic_scale(pb.PadicInstance(inst.p, sp.A_H))
    sQ = _padic_scale(pb.PadicInstance(inst.p, sp.A_Q))
    return _ok("entropy-addition", inst, sG == sH * sQ, {"s_G": sG, "s_H": sH, "s_Q": sQ}, sub, s_G=sG, s_H=sH, s_Q=sQ)


def padic_checks(inst: pb.PadicInstance, tags: set[str]) -> list[VerificationReport]:
    out: list[VerificationReport] = []
    Hs = padic_subgroups(inst)
    for H in Hs:
        if "A" in tags:
            out.append(padic_A(inst, H))
        if "B" in tags:
            out.append(padic_B(inst, H))
        if tags & {"C.a", "C.b", "C.c"}:
            out.extend(r for r in padic_C(inst, H) if r.theorem in tags)
        if "entropy-addition" in tags:
            out.append(padic_entropy(inst, H))
    if "D" in tags:
        out.append(padic_D(inst))
    if tags & {"E", "fi-steps"}:
        out.extend(r for r in padic_E(inst) if r.theorem in tags)
    if any(t.startswith("F.") for t in tags):
        out.extend(r for r in padic_F(inst) if r.theorem in tags)
    if tags & {"modVpVm", "when-TB", "keynub", "good-prepar", "parblev"}:
        out.extend(r for r in padic_lemmas(inst) if r.theorem in tags)
    return out


# ============================================================================
# full shifts
# ============================================================================

PROJECTION_WIDTH = 5


def _configs(inst: sh.ShiftInstance, width: int) -> Iterable[sh.FiniteSupportConfig]:
    start = 1 if inst.one_sided else -1
    for vals in itertools.product(range(inst.F.order), repeat=width):
        yield sh.FiniteSupportConfig(start, vals).trimmed(inst.F.identity)


def shift_A(inst: sh.ShiftInstance, H: str) -> VerificationReport:
    """Membership checks on finite-support witnesses.

    Each witness must converge modulo H, lie in con(α) by the descriptor, and
    its orbit must actually clear a fixed window after finitely many shifts.
    """
    d = inst.decompose()
    e = inst.F.identity
    in_con = d.con.payload in ("finitely-supported", "support-bounded-above")
    window = (1, 4) if inst.one_sided else (-4, 4)
    bad = None
    for x in _configs(inst, 4):
        y = x
        for _ in range(12):
            y = inst.shift(y)
        cleared = all(y.at(j, e) == e for j in range(window[0], window[1] + 1))
        if not (inst.converges_mod(("orbit", x), H) and in_con and cleared):
            bad = {"config": list(x.values), "start": x.start, "cleared": cleared}
            break
    return _ok("A", inst, bad is None, bad, H, witnesses=inst.F.order**4, con=d.con.payload)


def shift_B(inst: sh.ShiftInstance, H: str) -> VerificationReport:
    """Right-shift trajectories: each finite-support x has one, and it converges to e."""
    bad = None
    e = inst.F.identity
    for x in _configs(inst, 4):
        traj = [x]
        for _ in range(6):
            traj.append(inst.right_shift(traj[-1]))
        if any(inst.shift(traj[k + 1]) != traj[k] for k in range(len(traj) - 1)):
            bad = {"config": list(x.values), "why": "not a regressive trajectory"}
            break
        window = (1, 4) if inst.one_sided else (-1, 2)
        far = traj[-1]
        if any(far.at(j, e) != e for j in range(window[0], window[1] + 1)) and not x.is_identity(e):
            bad = {"config": list(x.values), "why": "trajectory does not leave the window"}
            break
    d = inst.decompose()
    con_minus = d.con_minus.payload
    ok = bad is None and (con_minus == "whole" or not inst.one_sided)
    return _ok("B", inst, ok, bad or {"con_minus": con_minus}, H, con_minus=con_minus, trajectory_len=6)


def shift_D(inst: sh.ShiftInstance) -> VerificationReport:
    d = inst.decompose()
    if not d.nub.computed:
        return _skip("D", inst, SkipReason.NOT_COMPUTED, d.nub.note)
    evidence = sh.bik_density_evidence(inst, PROJECTION_WIDTH)
    nub_is_G = d.nub.payload == "whole" and all(evidence.values())
    nub_trivial = not nub_is_G and d.nub.payload == "trivial"
    # con is dense (full projections) but proper, so not closed
    dense = all(
        sh.finite_support_projection(inst, 1, m) == sh.window_projection(inst, inst.whole(), 1, m)
        for m in range(1, PROJECTION_WIDTH + 1)
    )
    con_closed = bool(d.con.closed) or not dense
    tidy = sh.tidy_windowed_subgroups(inst, 3)
    small = any(U != inst.whole() for U in tidy)
    ok = nub_trivial == con_closed and small == nub_trivial
    return _ok(
        "D", inst, ok, {"nub_trivial": nub_trivial, "con_closed": con_closed},
        nub_trivial=nub_trivial, con_closed=con_closed, bik_projection_full=evidence, con_projection_full=dense,
        tidy_windowed=len(tidy), small_tidy=small,
    )


def shift_E(inst: sh.ShiftInstance) -> list[VerificationReport]:
    d = inst.decompose()
    out = []
    for tag, desc in (("E", d.con_minus), ("fi-steps", d.par_minus)):
        if not desc.computed or not sh.SYMBOLIC_RULES[desc.payload][1]:
            out.append(_skip(tag, inst, SkipReason.NOT_MATERIALIZABLE, "restriction is not a full-shift instance"))
            continue
        # closure is all of G, so the restriction is α itself
        s = inst.scale_result().value
        out.append(_ok(tag, inst, s == inst.scale_result().value, {"s": s}, s=s, restricted_to="G"))
    return out


def shift_F(inst: sh.ShiftInstance) -> list[VerificationReport]:
    note = "no small tidy subgroups: con(α) is not closed"
    return [_skip(t, inst, SkipReason.NO_SMALL_TIDY, note) for t in ("F.a", "F.b", "F.c", "F.d", "F.e", "F.f")]


def shift_lemmas(inst: sh.ShiftInstance) -> list[VerificationReport]:
    out = [_skip("modVpVm", inst, SkipReason.NOT_MATERIALIZABLE, "V_-- is not a windowed subgroup")]
    d = inst.decompose()
    subs = sh.windowed_subgroups(inst, 3)
    if d.nub.computed:
        nub_is_G = d.nub.payload == "whole"
        bad = None
        for V in subs:
            if inst.tidy_above_certificate(V):
                tidy = displacement_index(inst, V) == 1
                contains_nub = V == inst.whole() if nub_is_G else True
                if tidy != contains_nub:
                    bad = V.describe(inst.F)
                    break
        out.append(_ok("when-TB", inst, bad is None, {"subgroup": bad}, subgroups=len(subs)))
        # keynub (d), (e) at window projections
        ok = True
        for m in range(1, PROJECTION_WIDTH + 1):
            full = sh.window_projection(inst, inst.whole(), 1, m)
            closure_con = sh.finite_support_projection(inst, 1, m)
            con_nub = sh.window_projection(inst, d.nub, 1, m)
            con_lev = sh.kernel_projection(inst, m, m)  # con ∩ lev ⊇ ker σ^m since lev = G
            ok &= closure_con == full == con_nub and con_lev == sh.window_projection(inst, d.nub, 1, m)
        out.append(_ok("keynub", inst, ok, {"width": PROJECTION_WIDTH}, widths=PROJECTION_WIDTH))
    else:
        out.append(_skip("when-TB", inst, SkipReason.NOT_COMPUTED, d.nub.note))
        out.append(_skip("keynub", inst, SkipReason.NOT_COMPUTED, d.nub.note))
    out.append(_skip("good-prepar", inst, SkipReason.NOT_MATERIALIZABLE, "K_+ and K_- need not be windowed"))
    out.append(_skip("parblev", inst, SkipReason.NO_SMALL_TIDY, "lev = G has no α-stable proper windowed subgroup"))
    return out


def shift_entropy(inst: sh.ShiftInstance) -> VerificationReport:
    return _skip("entropy-addition", inst, SkipReason.CON_NOT_CLOSED, "con(α) is not closed")


def shift_checks(inst: sh.ShiftInstance, tags: set[str]) -> list[VerificationReport]:
    out: list[VerificationReport] = []
    for H in ("trivial", "whole"):
        if "A" in tags:
            out.append(shift_A(inst, H))
        if "B" in tags:
            out.append(shift_B(inst, H))
    for t in ("C.a", "C.b", "C.c"):
        if t in tags:
            out.append(_skip(t, inst, SkipReason.NOT_MATERIALIZABLE, "restriction to a closed H is not a full shift"))
    if "D" in tags:
        out.append(shift_D(inst))
    if tags & {"E", "fi-steps"}:
        out.extend(r for r in shift_E(inst) if r.theorem in tags)
    if any(t.startswith("F.") for t in tags):
        out.extend(r for r in shift_F(inst) if r.theorem in tags)
    if tags & {"modVpVm", "when-TB", "keynub", "good-prepar", "parblev"}:
        out.extend(r for r in shift_lemmas(inst) if r.theorem in tags)
    if "entropy-addition" in tags:
        out.append(shift_entropy(inst))
    return out


# ============================================================================
# instance stream and runner
# ============================================================================


def named_padic_matrices(p: int) -> list[tuple[str, list[list[Fraction]]]]:
    q = Fraction(1, p)
    comp = [[Fraction(0), Fraction(-5)], [Fraction(1), Fraction(3)]]
    return [
        ("diag(1/p)", [[q]]),
        ("diag(1/p,1/p^2)", [[q, 0], [0, q * q]]),
        ("companion(x^2-3x+5)", comp),
        ("companion(x^2-3x+5)^-1", [list(r) for r in inverse(comp)]),
        ("diag(1/p,1,p)", [list(r) for r in diag([q, 1, p])]),
        ("diag(1/p,1/p)", [[q, 0], [0, q]]),
        ("diag(1/p,p)", [[q, 0], [0, Fraction(p)]]),
        ("unipotent", [[1, 1], [0, 1]]),
        ("nilpotent", [[0, 1], [0, 0]]),
        ("singular-mixed", [[q, 0], [0, 0]]),
        ("identity", [[1, 0], [0, 1]]),
        ("upper(1/p,p)", [[q, 1], [0, Fraction(p)]]),
    ]


def named_padic_instances(primes: Sequence[int] = (2, 3, 5)) -> list[pb.PadicInstance]:
    return [pb.PadicInstance(p, A, name) for p in primes for name, A in named_padic_matrices(p)]


def random_integral_matrices(seed: int, count: int, max_n: int = 3, bound: int = 9) -> list[list[list[int]]]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        out.append([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
    return out


RANDOM_PADIC = 12


def generate_instances(seed: int = 0) -> list[GroupInstance]:
    """Finite catalog × all endomorphisms, named and seeded random p-adic matrices, four shifts."""
    out: list[GroupInstance] = list(fin.catalog_instances())
    out += named_padic_instances()
    rng = random.Random(seed)
    for k, A in enumerate(random_integral_matrices(seed, RANDOM_PADIC)):
        p = rng.choice((2, 3, 5))
        out.append(pb.PadicInstance(p, A, f"random-{seed}-{k}"))
    for F in ("C2", "C3"):
        for I in (sh.ONE_SIDED, sh.TWO_SIDED):
            out.append(sh.shift_instance(F, I))
    return out


def check_instance(inst: GroupInstance, tags: Iterable[str] = TAGS) -> list[VerificationReport]:
    tags = set(tags)
    t0 = time.perf_counter()
    if isinstance(inst, fin.FiniteInstance):
        out = finite_checks(inst, tags)
    elif isinstance(inst, pb.PadicInstance):
        out = padic_checks(inst, tags)
    elif isinstance(inst, sh.ShiftInstance):
        out = shift_checks(inst, tags)
    else:
        raise TypeError(f"no checks for {type(inst).__name__}")
    dt = time.perf_counter() - t0
    for r in out:
        r.timing = dt / max(1, len(out))
    return out


def _run_one(args):
    inst, tags = args
    return check_instance(inst, tags)


def _order(r: VerificationReport):
    return (r.instance, TAGS.index(r.theorem), repr(r.subgroup))


def run_suite(
    instances: Sequence[GroupInstance], tags: Iterable[str] = TAGS, jobs: int = 1
) -> list[VerificationReport]:
    tags = tuple(t for t in TAGS if t in set(tags))
    work = [(inst, tags) for inst in instances]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_run_one, work, chunksize=8))
    else:
        chunks = [_run_one(w) for w in work]
    reports = [r for c in chunks for r in c]
    return sorted(reports, key=_order)


def summarize(reports: Sequence[VerificationReport]) -> dict:
    out: dict[str, dict[str, int]] = {}
    for r in reports:
        row = out.setdefault(r.theorem, {PASS: 0, FAIL: 0, SKIPPED: 0})
        row[r.status] += 1
    return {t: out[t] for t in TAGS if t in out}


def check_theorem(tag: str, inst: GroupInstance, H=None) -> list[VerificationReport]:
    """Run one theorem on one instance (optionally for a single H)."""
    if tag not in TAGS:
        raise ValueError(f"unknown theorem tag {tag!r}")
    if H is None:
        return [r for r in check_instance(inst, {tag}) if r.theorem == tag]
    if isinstance(inst, fin.FiniteInstance):
        fn: dict[str, Callable] = {
            "A": lambda: [finite_A(inst, H)],
            "B": lambda: [finite_B(inst, H)],
            "entropy-addition": lambda: [finite_entropy(inst, H)],
        }
        if tag.startswith("C."):
            return [r for r in finite_C(inst, H) if r.theorem == tag]
    elif isinstance(inst, pb.PadicInstance):
        H = _key_rows(H)
        fn = {
            "A": lambda: [padic_A(inst, H)],
            "B": lambda: [padic_B(inst, H)],
            "entropy-addition": lambda: [padic_entropy(inst, H)]
            if pb.is_invariant_subspace(inst.A, H)
            else [_skip("entropy-addition", inst, SkipReason.PRECONDITION, "H is not invariant", _rows(H))],
        }
        if tag.startswith("C."):
            return [r for r in padic_C(inst, H) if r.theorem == tag]
    else:
        fn = {"A": lambda: [shift_A(inst, H)], "B": lambda: [shift_B(inst, H)]}
    if tag in fn:
        return fn[tag]()
    return check_theorem(tag, inst)
