"""Full shifts F^N (one-sided) and F^Z (two-sided) under the left shift.

Compact open subgroups are windowed: U(S, [a, b]) = {x : x|[a,b] ∈ S} with S
a subgroup of the finite window group F^[a,b]. Every primitive reduces to
set operations on patterns over a common window.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import (
    COMPUTED,
    DEFAULT_L_MAX,
    Backend,
    Descriptor,
    DynamicalDecomposition,
    GroupInstance,
    NotASubgroup,
    ScaleResult,
    UndecidableInput,
    displacement_index,
    not_computed,
)
from .finite import FiniteGroup, all_subgroups, build_group

ONE_SIDED = "N"
TWO_SIDED = "Z"

Pattern = tuple[int, ...]


class UnsupportedInstance(ValueError):
    pass


@dataclass(frozen=True)
class WindowedSubgroup:
    """{x : x restricted to [a, b] lies in S}; an empty window (b < a) is the whole group."""

    a: int
    b: int
    S: frozenset

    @property
    def width(self) -> int:
        return max(0, self.b - self.a + 1)

    def describe(self, F: FiniteGroup) -> dict:
        if self.width == 0:
            return {"window": None, "constraint": "whole group"}
        pats = sorted(self.S)
        return {
            "window": [self.a, self.b],
            "constraint": [[F.labels[c] for c in pat] for pat in pats],
        }


@dataclass(frozen=True)
class FiniteSupportConfig:
    """Configuration equal to the identity outside [start, start + len(values) - 1]."""

    start: int
    values: tuple[int, ...]

    def at(self, j: int, e: int) -> int:
        k = j - self.start
        return self.values[k] if 0 <= k < len(self.values) else e

    def trimmed(self, e: int) -> "FiniteSupportConfig":
        vals = list(self.values)
        start = self.start
        while vals and vals[0] == e:
            vals.pop(0)
            start += 1
        while vals and vals[-1] == e:
            vals.pop()
        return FiniteSupportConfig(start if vals else 0, tuple(vals))

    def is_identity(self, e: int) -> bool:
        return all(v == e for v in self.values)


def _full(F: FiniteGroup, width: int) -> frozenset:
    return frozenset(itertools.product(range(F.order), repeat=width))


def _trivial(F: FiniteGroup, width: int) -> frozenset:
    return frozenset([(F.identity,) * width])


class ShiftInstance(GroupInstance):
    backend = Backend.SHIFT

    def __init__(self, F: FiniteGroup, index_set: str = ONE_SIDED):
        if index_set not in (ONE_SIDED, TWO_SIDED):
            raise ValueError("index set must be 'N' or 'Z'")
        self.F = F
        self.index_set = index_set
        self.first = 1 if index_set == ONE_SIDED else None

    def __repr__(self):
        return f"ShiftInstance({self.F.name}, {self.index_set})"

    def __eq__(self, other):
        return isinstance(other, ShiftInstance) and (self.F, self.index_set) == (other.F, other.index_set)

    def __hash__(self):
        return hash((self.F.table, self.index_set))

    @property
    def one_sided(self) -> bool:
        return self.index_set == ONE_SIDED

    @property
    def is_automorphism(self) -> bool:
        return not self.one_sided

    @property
    def is_compact(self) -> bool:
        return True

    def key(self) -> str:
        return f"shift/{self.F.name}/{self.index_set}"

    def describe(self) -> dict:
        return {"backend": "shift", "structure_group": self.F.name, "index_set": self.index_set, "map": "left shift"}

    def describe_subgroup(self, U: WindowedSubgroup):
        return U.describe(self.F)

    # -- window bookkeeping -----------------------------------------------------

    def make(self, a: int, b: int, S: Iterable[Pattern]) -> WindowedSubgroup:
        S = frozenset(tuple(p) for p in S)
        w = max(0, b - a + 1)
        if self.one_sided and w and a < 1:
            raise ValueError("one-sided windows start at coordinate 1")
        if any(len(p) != w for p in S) or not S:
            raise ValueError("patterns must match the window width")
        return self._trim(a, b, S)

    def _trim(self, a: int, b: int, S: frozenset) -> WindowedSubgroup:
        n = self.F.order
        while b >= a:
            rest = frozenset(p[1:] for p in S)
            if len(S) == len(rest) * n:
                S, a = rest, a + 1
                continue
            rest = frozenset(p[:-1] for p in S)
            if len(S) == len(rest) * n:
                S, b = rest, b - 1
                continue
            break
        if b < a:
            return WindowedSubgroup(0, -1, frozenset([()]))
        return WindowedSubgroup(a, b, S)

    def extend(self, U: WindowedSubgroup, a: int, b: int) -> frozenset:
        """Patterns on [a, b] ⊇ U's window of the elements of U."""
        if U.width == 0:
            return _full(self.F, b - a + 1)
        assert a <= U.a and U.b <= b
        left = list(itertools.product(range(self.F.order), repeat=U.a - a))
        right = list(itertools.product(range(self.F.order), repeat=b - U.b))
        return frozenset(l + s + r for s in U.S for l in left for r in right)

    def _common(self, *Us: WindowedSubgroup) -> tuple[int, int]:
        live = [U for U in Us if U.width]
        if not live:
            return 0, -1
        return min(U.a for U in live), max(U.b for U in live)

    def project(self, U: WindowedSubgroup, a: int, b: int) -> frozenset:
        """Image of U in the window group F^[a, b]."""
        if b < a:
            return frozenset([()])
        lo, hi = min(a, U.a if U.width else a), max(b, U.b if U.width else b)
        pats = self.extend(U, lo, hi) if U.width else _full(self.F, hi - lo + 1)
        return frozenset(p[a - lo : b - lo + 1] for p in pats)

    def is_subgroup(self, U: WindowedSubgroup) -> bool:
        t, inv = self.F.table, self.F.inverses
        S = U.S
        if (self.F.identity,) * U.width not in S:
            return False
        return all(tuple(t[x][inv[y]] for x, y in zip(p, q)) in S for p in S for q in S)

    # -- primitives -------------------------------------------------------------

    def whole(self) -> WindowedSubgroup:
        return WindowedSubgroup(0, -1, frozenset([()]))

    def trivial(self):
        raise UndecidableInput("the trivial subgroup of a shift is not open")

    def cylinder(self, a: int, b: int) -> WindowedSubgroup:
        """{x : x_j = e for a <= j <= b}."""
        return self.make(a, b, _trivial(self.F, b - a + 1))

    def image(self, U: WindowedSubgroup) -> WindowedSubgroup:
        if U.width == 0:
            return U
        a, b = U.a - 1, U.b - 1
        S = U.S
        if self.one_sided and a < 1:
            # coordinate 1 falls off the left end
            S = frozenset(p[1:] for p in S)
            a = 1
        return self._trim(a, b, S)

    def preimage(self, V: WindowedSubgroup) -> WindowedSubgroup:
        if V.width == 0:
            return V
        return self._trim(V.a + 1, V.b + 1, V.S)

    def preimage_meet(self, V, M):
        return self.intersect(self.preimage(V), M)

    def intersect(self, U, V):
        a, b = self._common(U, V)
        if b < a:
            return self.whole()
        return self._trim(a, b, self.extend(U, a, b) & self.extend(V, a, b))

    def contains(self, K, H) -> bool:
        a, b = self._common(K, H)
        if b < a:
            return True
        return self.extend(H, a, b) <= self.extend(K, a, b)

    def index(self, K, H) -> int:
        return windowed_index(self, K, H)

    # -- strategies ----------------------------------------------------------------

    def scale_result(self, l_max: int = DEFAULT_L_MAX) -> ScaleResult:
        G = self.whole()
        return ScaleResult(1, G, displacement_index(self, G), "compact-trivial")

    def tidy_above_certificate(self, V) -> bool:
        """V = V_+ V_- decided on V's own window.

        V_+ only constrains coordinates up to b and V_- only from a onwards, so
        a factorization on [a, b] extends to all of x; hence the product is V
        iff the projections P_+ and P_- multiply to S.
        """
        if V.width == 0:
            return True
        Pp, Pm = plus_projection(self, V), minus_projection(self, V)
        t = self.F.table
        prod = {tuple(t[x][y] for x, y in zip(p, q)) for p in Pp for q in Pm}
        return prod == set(V.S)

    def decompose(self) -> DynamicalDecomposition:
        return closed_form_decomposition(self)

    def tidying_procedure(self, U, l_max: int = DEFAULT_L_MAX):
        # only G is tidy (see tidy_windowed_subgroups), so every route ends there
        return self.whole()

    def converges_mod(self, trajectory, H) -> bool:
        """Orbits and right-shift trajectories of finitely supported points.

        The support leaves every finite window after finitely many steps, so
        the sequence converges to e and hence modulo any H.
        """
        kind, cfg = trajectory
        if kind not in ("orbit", "regressive"):
            raise UndecidableInput(f"unknown trajectory kind {kind!r}")
        if not isinstance(cfg, FiniteSupportConfig):
            raise UndecidableInput("only finitely supported configurations are decidable")
        return True

    # -- elements -------------------------------------------------------------------

    def shift(self, x: FiniteSupportConfig) -> FiniteSupportConfig:
        e = self.F.identity
        y = FiniteSupportConfig(x.start - 1, x.values)
        if self.one_sided:
            vals = [y.at(j, e) for j in range(1, max(1, y.start + len(y.values)))]
            y = FiniteSupportConfig(1, tuple(vals))
        return y.trimmed(e)

    def right_shift(self, x: FiniteSupportConfig) -> FiniteSupportConfig:
        """A preimage of x under the left shift (inserting e at coordinate 1 when one-sided)."""
        return FiniteSupportConfig(x.start + 1, x.values).trimmed(self.F.identity)

    def member(self, x: FiniteSupportConfig, U: WindowedSubgroup) -> bool:
        if U.width == 0:
            return True
        return tuple(x.at(j, self.F.identity) for j in range(U.a, U.b + 1)) in U.S


def windowed_index(inst: ShiftInstance, U: WindowedSubgroup, V: WindowedSubgroup) -> int:
    """[U : V] inside the window group over the union window."""
    a, b = inst._common(U, V)
    if b < a:
        return 1
    SU, SV = inst.extend(U, a, b), inst.extend(V, a, b)
    if not SV <= SU:
        raise NotASubgroup("V is not contained in U")
    if len(SU) % len(SV):
        raise NotASubgroup("constraint set is not a subgroup")
    return len(SU) // len(SV)


def _stable_filter(S: frozenset, step) -> frozenset:
    cur = S
    while True:
        nxt = frozenset(p for p in cur if step(p, cur))
        if nxt == cur:
            return cur
        cur = nxt


def minus_projection(inst: ShiftInstance, V: WindowedSubgroup) -> frozenset:
    """Projection of V_- to V's window: patterns that extend forward forever inside S."""
    n = inst.F.order
    return _stable_filter(V.S, lambda p, cur: any(p[1:] + (c,) in cur for c in range(n)))


def plus_projection(inst: ShiftInstance, V: WindowedSubgroup) -> frozenset:
    """Projection of V_+ to V's window: patterns with a backward extension inside V's translates."""
    n = inst.F.order
    if not inst.one_sided:
        return _stable_filter(V.S, lambda p, cur: any((c,) + p[:-1] in cur for c in range(n)))
    # one-sided: finitely many coordinates to the left, so enumerate [1, b] outright
    a, b = V.a, V.b
    ok = []
    for x in itertools.product(range(n), repeat=b):
        good = True
        for k in range(0, b):
            lo, hi = a - k, b - k
            if hi < 1:
                break
            pat = x[max(lo, 1) - 1 : hi]
            proj = V.S if lo >= 1 else frozenset(p[1 - lo :] for p in V.S)
            if pat not in proj:
                good = False
                break
        if good:
            ok.append(x[a - 1 : b])
    return frozenset(ok)


# -- closed forms ---------------------------------------------------------------------

SYMBOLIC_RULES = {
    # tag: (description, projection is full on every window, closed)
    "whole": ("G", True, True),
    "trivial": ("{e}", False, True),
    "finitely-supported": ("eventually trivial configurations", True, False),
    "support-bounded-above": ("configurations with x_j = e for all large j", True, False),
    "support-bounded-below": ("configurations with x_j = e for all small j", True, False),
}


def closed_form_decomposition(inst: ShiftInstance) -> DynamicalDecomposition:
    """Descriptors for the full shift.

    One-sided: the orbit of x tends to e iff x is eventually trivial, and the
    right shift gives every point a regressive trajectory tending to e. The
    kernels of the powers of the shift project onto every window, so bik and
    with it nub is all of G. Two-sided: con and con⁻ are the configurations
    with support bounded above and below; nub is left open.
    """
    if not isinstance(inst, ShiftInstance):
        raise UnsupportedInstance("closed forms exist only for full shifts")

    def sym(tag, note=""):
        return Descriptor(COMPUTED, "symbolic", tag, SYMBOLIC_RULES[tag][2], note or SYMBOLIC_RULES[tag][0])

    if inst.one_sided:
        return DynamicalDecomposition(
            "shift",
            con=sym("finitely-supported"),
            con_minus=sym("whole"),
            par=sym("whole"),
            par_minus=sym("whole"),
            lev=sym("whole"),
            nub=sym("whole", "G (contains the dense bik)"),
            bik=sym("whole", "closure of the kernels of the powers, dense"),
            big_cell=sym("whole"),
        )
    return DynamicalDecomposition(
        "shift",
        con=sym("support-bounded-above"),
        con_minus=sym("support-bounded-below"),
        par=sym("whole"),
        par_minus=sym("whole"),
        lev=sym("whole"),
        nub=not_computed("nub of the two-sided full shift is not decided here"),
        bik=sym("trivial", "the shift is injective"),
        big_cell=sym("whole"),
    )


class NoProjectionRule(ValueError):
    pass


def window_projection(inst: ShiftInstance, descriptor, a: int, b: int) -> frozenset:
    """Image of a described subgroup in F^[a, b]."""
    if isinstance(descriptor, WindowedSubgroup):
        return inst.project(descriptor, a, b)
    tag = descriptor.payload if isinstance(descriptor, Descriptor) else descriptor
    if not isinstance(tag, str) or tag not in SYMBOLIC_RULES:
        raise NoProjectionRule(f"no projection rule for {descriptor!r}")
    w = b - a + 1
    return _full(inst.F, w) if SYMBOLIC_RULES[tag][1] else _trivial(inst.F, w)


def kernel_projection(inst: ShiftInstance, n: int, m: int) -> frozenset:
    """Projection onto [1, m] of ker(σ^n), enumerated over configurations supported in [1, n].

    Anything in the kernel vanishes beyond n, so this finite family is the whole kernel.
    """
    if not inst.one_sided:
        return _trivial(inst.F, m)
    e = inst.F.identity
    out = set()
    for vals in itertools.product(range(inst.F.order), repeat=n):
        x = FiniteSupportConfig(1, vals)
        y = x
        for _ in range(n):
            y = inst.shift(y)
        if y.is_identity(e):
            out.add(tuple(x.at(j, e) for j in range(1, m + 1)))
    return frozenset(out)


def bik_density_evidence(inst: ShiftInstance, max_width: int = 5) -> dict[int, bool]:
    """For each width m, whether ker(σ^m) already projects onto all of F^[1, m]."""
    return {m: kernel_projection(inst, m, m) == _full(inst.F, m) for m in range(1, max_width + 1)}


def finite_support_projection(inst: ShiftInstance, a: int, b: int) -> frozenset:
    """Projection of the finitely supported configurations, enumerated on [a, b]."""
    e = inst.F.identity
    return frozenset(
        tuple(FiniteSupportConfig(a, vals).at(j, e) for j in range(a, b + 1))
        for vals in itertools.product(range(inst.F.order), repeat=b - a + 1)
    )


def windowed_subgroups(inst: ShiftInstance, max_width: int) -> list[WindowedSubgroup]:
    """Distinct windowed subgroups with windows of width <= max_width anchored at 1 (for 'N') or 0."""
    seen = {inst.whole()}
    out = [inst.whole()]
    start = 1 if inst.one_sided else 0
    for w in range(1, max_width + 1):
        for S in _window_subgroups(inst.F, w):
            U = inst._trim(start, start + w - 1, S)
            if U not in seen:
                seen.add(U)
                out.append(U)
    return out


def _window_subgroups(F: FiniteGroup, w: int) -> list[frozenset]:
    WG = _window_group(F, w)
    pats = list(itertools.product(range(F.order), repeat=w))
    return [frozenset(pats[i] for i in WG.elements(m)) for m in all_subgroups(WG, bound=F.order**w)]


def _window_group(F: FiniteGroup, w: int) -> FiniteGroup:
    pats = list(itertools.product(range(F.order), repeat=w))
    idx = {p: i for i, p in enumerate(pats)}
    table = [[idx[tuple(F.table[x][y] for x, y in zip(p, q))] for q in pats] for p in pats]
    return FiniteGroup(f"{F.name}^{w}", tuple(tuple(r) for r in table), idx[(F.identity,) * w], tuple(map(str, pats)))


def tidy_windowed_subgroups(inst: ShiftInstance, max_width: int) -> list[WindowedSubgroup]:
    return [U for U in windowed_subgroups(inst, max_width) if displacement_index(inst, U) == 1]


@functools.lru_cache(maxsize=None)
def shift_instance(F_spec: str, index_set: str) -> ShiftInstance:
    return ShiftInstance(build_group(F_spec), index_set)


def topological_entropy_exponent(inst: ShiftInstance) -> int:
    """h_top of the full shift is ln |F|; return |F|."""
    return inst.F.order


def parse_windowed(inst: ShiftInstance, payload) -> WindowedSubgroup:
    """{"window": [a, b], "constraint": [[labels...], ...]} or "G"."""
    if payload in ("G", None) or payload == {"window": None}:
        return inst.whole()
    a, b = payload["window"]
    idx = {l: i for i, l in enumerate(inst.F.labels)}
    cons = payload.get("constraint", "trivial")
    if cons == "trivial":
        S = _trivial(inst.F, b - a + 1)
    else:
        S = [tuple(idx[str(c)] if not isinstance(c, int) else c for c in pat) for pat in cons]
    U = inst.make(a, b, S)
    if not inst.is_subgroup(U):
        raise NotASubgroup("constraint set is not a subgroup of the window group")
    return U


def config_from(values: Sequence[int], start: int) -> FiniteSupportConfig:
    return FiniteSupportConfig(start, tuple(values))
