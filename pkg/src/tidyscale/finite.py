"""Finite groups: every notion is decidable by enumeration.

Elements are indices 0..n-1 into a multiplication table and subgroups are
integer bitmasks, which double as canonical forms.
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
    TidyError,
    UndecidableInput,
    displacement_index,
    tidy_above,
)

SUBGROUP_BOUND = 64
CATALOG = ("C2", "C3", "C4", "C6", "C8", "C2xC2", "C2xC4", "C2^3", "C3xC3", "S3", "D4", "Q8")


class InvalidTable(ValueError):
    pass


class BoundExceeded(ValueError):
    pass


class NotInvariant(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple[tuple[int, ...], ...]
    identity: int
    labels: tuple[str, ...]

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @functools.cached_property
    def inverses(self) -> tuple[int, ...]:
        e = self.identity
        return tuple(next(b for b in range(self.order) if self.table[a][b] == e) for a in range(self.order))

    @property
    def full_mask(self) -> int:
        return (1 << self.order) - 1

    def elements(self, mask: int) -> list[int]:
        return [i for i in range(self.order) if mask >> i & 1]

    def mask_of(self, elems: Iterable[int]) -> int:
        m = 0
        for x in elems:
            m |= 1 << x
        return m

    def generated(self, gens: Iterable[int]) -> int:
        """Subgroup generated by ``gens`` (closure under products; finite, so inverses come free)."""
        mask = 1 << self.identity
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if not mask >> y & 1:
                        mask |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return mask

    def product_set(self, A: int, B: int) -> int:
        out = 0
        for a in self.elements(A):
            row = self.table[a]
            for b in self.elements(B):
                out |= 1 << row[b]
        return out

    def is_subgroup(self, mask: int) -> bool:
        if not mask >> self.identity & 1:
            return False
        els = self.elements(mask)
        return all(mask >> self.table[a][self.inverses[b]] & 1 for a in els for b in els)

    def is_normal(self, mask: int) -> bool:
        inv = self.inverses
        return all(
            mask >> self.table[self.table[g][h]][inv[g]] & 1 for g in range(self.order) for h in self.elements(mask)
        )

    def describe_mask(self, mask: int) -> list[str]:
        return [self.labels[i] for i in self.elements(mask)]

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.table[y][x]
            k += 1
        return k


def _check_axioms(table: Sequence[Sequence[int]], full: bool) -> int:
    n = len(table)
    if n == 0 or any(len(r) != n for r in table):
        raise InvalidTable("table must be square and non-empty")
    if any(not 0 <= x < n for r in table for x in r):
        raise InvalidTable("entries out of range")
    ids = [e for e in range(n) if all(table[e][x] == x and table[x][e] == x for x in range(n))]
    if not ids:
        raise InvalidTable("no identity element")
    e = ids[0]
    for a in range(n):
        if not any(table[a][b] == e for b in range(n)):
            raise InvalidTable(f"element {a} has no inverse")
    triples = itertools.product(range(n), repeat=3) if full else ((a, b, c) for a in range(n) for b in range(min(n, 8)) for c in range(min(n, 8)))
    for a, b, c in triples:
        if table[table[a][b]][c] != table[a][table[b][c]]:
            raise InvalidTable(f"associativity fails at ({a},{b},{c})")
    return e


def group_from_table(table: Sequence[Sequence[int]], name: str = "table", labels: Sequence[str] | None = None) -> FiniteGroup:
    t = tuple(tuple(int(x) for x in r) for r in table)
    e = _check_axioms(t, full=len(t) <= 256)
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(len(t)))
    return FiniteGroup(name, t, e, labels)


def _from_elements(elems: list, mul, name: str, label) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elems)}
    table = [[index[mul(a, b)] for b in elems] for a in elems]
    return group_from_table(table, name, [label(x) for x in elems])


def _abelian(factors: Sequence[int]) -> FiniteGroup:
    if not factors or any(int(f) < 1 for f in factors):
        raise InvalidTable("cyclic factors must be positive")
    elems = list(itertools.product(*[range(f) for f in factors]))
    name = "x".join(f"C{f}" for f in factors)

    def mul(a, b):
        return tuple((x + y) % f for x, y, f in zip(a, b, factors))

    def label(a):
        return str(a[0]) if len(a) == 1 else "(" + ",".join(map(str, a)) + ")"

    return _from_elements(elems, mul, name, label)


def _perm_closure(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    e = tuple(range(len(gens[0])))
    seen = [e]
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(x[i] for i in g)
                if y not in seen:
                    seen.append(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def _compose(a, b):
    # (a*b)(i) = a(b(i))
    return tuple(a[i] for i in b)


def _quaternion(a, b):
    a1, b1, c1, d1 = a
    a2, b2, c2, d2 = b
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


def _qlabel(q):
    names = ("1", "i", "j", "k")
    i = next(k for k in range(4) if q[k])
    return ("-" if q[i] < 0 else "") + names[i]


def build_group(spec) -> FiniteGroup:
    """Factor list, catalog name ("C2xC4", "C2^3", "S3", "D4", "Q8") or explicit table."""
    if isinstance(spec, FiniteGroup):
        return spec
    if isinstance(spec, str):
        return _named(spec)
    if isinstance(spec, dict):
        if "table" in spec:
            return group_from_table(spec["table"], spec.get("name", "table"), spec.get("labels"))
        if "factors" in spec:
            return _abelian([int(f) for f in spec["factors"]])
        if "named" in spec:
            return _named(spec["named"])
        raise InvalidTable("group spec needs 'factors', 'named' or 'table'")
    spec = list(spec)
    if spec and all(isinstance(r, (list, tuple)) for r in spec):
        return group_from_table(spec)
    return _abelian([int(f) for f in spec])


@functools.lru_cache(maxsize=None)
def _named(name: str) -> FiniteGroup:
    key = name.replace(" ", "").replace("×", "x")
    if key == "S3":
        elems = _perm_closure([(1, 0, 2), (1, 2, 0)])
        return _from_elements(elems, _compose, "S3", lambda x: "".join(map(str, x)))
    if key == "D4":
        elems = _perm_closure([(1, 2, 3, 0), (0, 3, 2, 1)])
        return _from_elements(elems, _compose, "D4", lambda x: "".join(map(str, x)))
    if key == "Q8":
        units = []
        for k in range(4):
            for s in (1, -1):
                q = [0, 0, 0, 0]
                q[k] = s
                units.append(tuple(q))
        return _from_elements(units, _quaternion, "Q8", _qlabel)
    if "^" in key:
        base, exp = key.split("^")
        if not base.startswith("C"):
            raise InvalidTable(f"unknown group {name!r}")
        return _abelian([int(base[1:])] * int(exp))
    parts = key.split("x")
    if all(p.startswith("C") and p[1:].isdigit() for p in parts):
        return _abelian([int(p[1:]) for p in parts])
    raise InvalidTable(f"unknown group {name!r}")


# -- subgroups and endomorphisms ------------------------------------------------


def all_subgroups(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> list[int]:
    """Every subgroup, as bitmasks in increasing order."""
    return list(_all_subgroups(G, bound))


@functools.lru_cache(maxsize=None)
def _all_subgroups(G: FiniteGroup, bound: int) -> tuple[int, ...]:
    if G.order > bound:
        raise BoundExceeded(f"|G| = {G.order} exceeds the subgroup bound {bound}")
    cyclic = {G.generated([x]) for x in range(G.order)}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for A in frontier:
            for C in cyclic:
                if A | C != A:
                    S = G.generated(G.elements(A | C))
                    if S not in subs:
                        new.add(S)
        subs |= new
        frontier = new
    return tuple(sorted(subs, key=lambda m: (bin(m).count("1"), m)))


def _generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    H = 1 << G.identity
    while H != G.full_mask:
        best = max((x for x in range(G.order) if not H >> x & 1), key=lambda x: (G.element_order(x), -x))
        gens.append(best)
        H = G.generated(gens)
    return gens


def _extend(G: FiniteGroup, gens: list[int], imgs: Sequence[int]) -> tuple[int, ...] | None:
    alpha: list[int | None] = [None] * G.order
    alpha[G.identity] = G.identity
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g, a in zip(gens, imgs):
                y = G.table[x][g]
                v = G.table[alpha[x]][a]  # type: ignore[index]
                if alpha[y] is None:
                    alpha[y] = v
                    nxt.append(y)
                elif alpha[y] != v:
                    return None
        frontier = nxt
    return tuple(alpha)  # type: ignore[arg-type]


def is_endomorphism(G: FiniteGroup, alpha: Sequence[int]) -> bool:
    t = G.table
    return len(alpha) == G.order and all(alpha[t[a][b]] == t[alpha[a]][alpha[b]] for a in range(G.order) for b in range(G.order))


def all_endomorphisms(G: FiniteGroup, bound: int = SUBGROUP_BOUND) -> list[tuple[int, ...]]:
    return list(_all_endos(G, bound))


@functools.lru_cache(maxsize=None)
def _all_endos(G: FiniteGroup, bound: int) -> tuple[tuple[int, ...], ...]:
    if G.order > bound:
        raise BoundExceeded(f"|G| = {G.order} exceeds the bound {bound}")
    if G.order == 1:
        return ((G.identity,),)
    gens = _generators(G)
    out = set()
    for imgs in itertools.product(range(G.order), repeat=len(gens)):
        # image of a generator must have order dividing the generator's
        if any(G.element_order(g) % G.element_order(a) for g, a in zip(gens, imgs)):
            continue
        alpha = _extend(G, gens, imgs)
        if alpha is not None and is_endomorphism(G, alpha):
            out.add(alpha)
    return tuple(sorted(out))


# -- the instance ------------------------------------------------------------------


@dataclass(frozen=True)
class RegressiveTrajectory:
    """x_0, x_1, ... given as a finite prefix followed by a repeating cycle."""

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    def tail(self) -> tuple[int, ...]:
        return self.cycle

    def span(self) -> int:
        return len(self.prefix) + len(self.cycle)


class FiniteInstance(GroupInstance):
    backend = Backend.FINITE

    def __init__(self, G: FiniteGroup, alpha: Sequence[int], name: str = ""):
        alpha = tuple(int(a) for a in alpha)
        if not is_endomorphism(G, alpha):
            raise ValueError("map is not an endomorphism")
        self.G = G
        self.alpha = alpha
        self.name = name

    def __repr__(self):
        return f"FiniteInstance({self.G.name}, {list(self.alpha)})"

    def __eq__(self, other):
        return isinstance(other, FiniteInstance) and self.G == other.G and self.alpha == other.alpha

    def __hash__(self):
        return hash((self.G.table, self.alpha))

    @property
    def is_automorphism(self) -> bool:
        return len(set(self.alpha)) == self.G.order

    @property
    def is_compact(self) -> bool:
        return True

    def key(self) -> str:
        return f"finite/{self.G.name}/{','.join(map(str, self.alpha))}"

    def describe(self) -> dict:
        return {"backend": "finite", "group": self.G.name, "order": self.G.order, "endomorphism": list(self.alpha)}

    def describe_subgroup(self, U: int):
        return {"elements": self.G.describe_mask(U), "order": bin(U).count("1")}

    # -- primitives --------------------------------------------------------------

    def whole(self) -> int:
        return self.G.full_mask

    def trivial(self) -> int:
        return 1 << self.G.identity

    def apply(self, x: int, k: int = 1) -> int:
        for _ in range(k):
            x = self.alpha[x]
        return x

    def image(self, U: int) -> int:
        return self.G.mask_of(self.alpha[x] for x in self.G.elements(U))

    def preimage(self, V: int) -> int:
        return self.G.mask_of(x for x in range(self.G.order) if V >> self.alpha[x] & 1)

    def preimage_meet(self, V: int, M: int) -> int:
        return self.preimage(V) & M

    def intersect(self, U: int, V: int) -> int:
        return U & V

    def contains(self, K: int, H: int) -> bool:
        return H & ~K == 0

    def index(self, K: int, H: int) -> int:
        if not self.contains(K, H) or not self.G.is_subgroup(H):
            raise NotASubgroup("H is not a subgroup of K")
        return bin(K).count("1") // bin(H).count("1")

    def power_image(self, U: int, k: int) -> int:
        for _ in range(k):
            U = self.image(U)
        return U

    @functools.cached_property
    def eventual_image(self) -> int:
        return self.power_image(self.whole(), self.G.order)

    @functools.cached_property
    def eventual_kernel(self) -> int:
        n = self.G.order
        return self.G.mask_of(x for x in range(n) if self.apply(x, n) == self.G.identity)

    # -- minus/plus parts ----------------------------------------------------------

    def minus_part(self, K: int) -> int:
        """K_- : points of K whose forward orbit stays in K."""
        V = K
        while True:
            nxt = self.preimage_meet(V, K)
            if nxt == V:
                return V
            V = nxt

    def plus_part(self, K: int) -> int:
        """K_+ : points of K with a regressive trajectory inside K."""
        V = K
        while True:
            nxt = K & self.image(V)
            if nxt == V:
                return V
            V = nxt

    def minus_minus(self, V: int) -> int:
        """V_-- : points eventually mapped into V_-."""
        Vm = self.minus_part(V)
        n = self.G.order
        return self.G.mask_of(x for x in range(n) if Vm >> self.apply(x, n) & 1)

    def plus_plus(self, V: int) -> int:
        """V_++ : union of the forward images of V_+."""
        W = self.plus_part(V)
        out = W
        for _ in range(self.G.order):
            W = self.image(W)
            out |= W
        return out

    # -- strategies ------------------------------------------------------------------

    def scale_result(self, l_max: int = DEFAULT_L_MAX) -> ScaleResult:
        G = self.whole()
        return ScaleResult(1, G, displacement_index(self, G), "compact-trivial")

    def tidy_above_certificate(self, V: int) -> bool:
        return self.G.product_set(self.plus_part(V), self.minus_part(V)) == V

    def decompose(self) -> DynamicalDecomposition:
        return exact_sets(self)

    def tidying_procedure(self, U: int, l_max: int = DEFAULT_L_MAX) -> int:
        return tidying_steps(self, U, l_max)[-1]

    def core_part(self, K: int) -> int:
        return self.plus_part(K) & self.minus_part(K)

    def converges_mod(self, trajectory, H: int) -> bool:
        kind, data = trajectory
        n = self.G.order
        if kind == "orbit":
            x = int(data)
            # orbits are eventually periodic with preperiod and period at most |G|
            return all(H >> self.apply(x, k) & 1 for k in range(n, 2 * n + 1))
        if kind == "regressive":
            traj = data if isinstance(data, RegressiveTrajectory) else RegressiveTrajectory(*data)
            for i in range(1, traj.span() + len(traj.cycle)):
                if self.alpha[traj[i]] != traj[i - 1]:
                    raise UndecidableInput("sequence is not a regressive trajectory")
            return all(H >> y & 1 for y in traj.cycle)
        raise UndecidableInput(f"unknown trajectory kind {kind!r}")


def exhaustive_scale(inst: FiniteInstance) -> tuple[int, int]:
    """(minimum displacement over all subgroups, a subgroup attaining it)."""
    best = None
    for U in all_subgroups(inst.G):
        d = displacement_index(inst, U)
        if best is None or d < best[0]:
            best = (d, U)
    return best  # type: ignore[return-value]


def tidy_subgroups(inst: FiniteInstance) -> list[int]:
    s = inst.scale_result().value
    return [U for U in all_subgroups(inst.G) if displacement_index(inst, U) == s]


def nub_literal(inst: FiniteInstance) -> int:
    out = inst.whole()
    for U in tidy_subgroups(inst):
        out &= U
    return out


def _elements_descriptor(inst: FiniteInstance, mask: int, note: str = "") -> Descriptor:
    return Descriptor(COMPUTED, "elements", mask, True, note)


def exact_sets(inst: FiniteInstance) -> DynamicalDecomposition:
    """Every descriptor by enumeration.

    con is the union of the kernels of the powers of α and con⁻ is trivial
    (convergence in a discrete group is eventual equality). A bounded regressive
    trajectory exists exactly for points of the eventual image E, so par⁻ = E
    and lev = par ∩ par⁻ = E; α is bijective on E, so the part of par⁻ killed
    by a power of α, bik, is trivial.
    """
    G = inst.G
    E = inst.eventual_image
    con = inst.eventual_kernel
    big = G.product_set(G.product_set(con, E), inst.trivial())
    return DynamicalDecomposition(
        "finite",
        con=_elements_descriptor(inst, con),
        con_minus=_elements_descriptor(inst, inst.trivial()),
        par=_elements_descriptor(inst, G.full_mask),
        par_minus=_elements_descriptor(inst, E),
        lev=_elements_descriptor(inst, G.full_mask & E),
        nub=_elements_descriptor(inst, nub_literal(inst), "intersection of all tidy subgroups"),
        bik=_elements_descriptor(inst, E & con),
        big_cell=_elements_descriptor(inst, big),
    )


def regressive_search(inst: FiniteInstance, x: int, H: int) -> RegressiveTrajectory | None:
    """A regressive trajectory for x that ends up (and stays) in H, or None.

    A trajectory staying in H forever lives in the stable core S of H (the
    intersection of the α^n(H)), on which α is a permutation. So search the
    preimage graph from x for a point of S, then follow α⁻¹ around its cycle.
    """
    if inst.image(H) & ~H:
        raise NotInvariant("α(H) is not contained in H")
    G = inst.G
    S = inst.power_image(H, G.order)
    inv_on_S = {inst.alpha[y]: y for y in G.elements(S)}
    preds: dict[int, list[int]] = {}
    for y in range(G.order):
        preds.setdefault(inst.alpha[y], []).append(y)
    # BFS over preimages; depth never exceeds |G| because nodes are not revisited
    parent = {x: None}
    frontier = [x]
    hit = x if S >> x & 1 else None
    while frontier and hit is None:
        nxt = []
        for u in frontier:
            for y in preds.get(u, []):
                if y not in parent:
                    parent[y] = u
                    if S >> y & 1:
                        hit = y
                        break
                    nxt.append(y)
            if hit is not None:
                break
        frontier = nxt
    if hit is None:
        return None
    path = []
    u = hit
    while u is not None:
        path.append(u)
        u = parent[u]
    path.reverse()  # x = path[0], ..., hit = path[-1]
    cycle = [hit]
    y = inv_on_S[hit]
    while y != hit:
        cycle.append(y)
        y = inv_on_S[y]
    return RegressiveTrajectory(tuple(path[:-1]), tuple(cycle))


def con_mod(inst: FiniteInstance, H: int) -> int:
    """con(α, H): points whose orbit eventually stays in H."""
    return inst.G.mask_of(x for x in range(inst.G.order) if inst.converges_mod(("orbit", x), H))


def con_minus_mod(inst: FiniteInstance, H: int) -> int:
    """con⁻(α, H): points with a regressive trajectory converging modulo H."""
    return inst.G.mask_of(x for x in range(inst.G.order) if regressive_search(inst, x, H) is not None)


def match_trajectory(inst: FiniteInstance, traj: RegressiveTrajectory, H: int) -> RegressiveTrajectory | None:
    """A regressive trajectory (y_n) with y_n ∈ x_n H for all n that converges to e.

    Searches the |traj| × |G| state space of (position, y). Once y = e at a
    position of the cycle whose every entry lies in H, the constant e continues.
    """
    G = inst.G
    e = G.identity
    L = len(traj.prefix)
    c = len(traj.cycle)

    def coset_ok(n: int, y: int) -> bool:
        return H >> G.table[G.inverses[traj[n]]][y] & 1 == 1

    def norm(n: int) -> int:
        return n if n < L else L + (n - L) % c

    cycle_in_H = all(H >> z & 1 for z in traj.cycle)
    preds: dict[int, list[int]] = {}
    for y in range(G.order):
        preds.setdefault(inst.alpha[y], []).append(y)
    starts = [y for y in G.elements(G.product_set(1 << traj[0], H))]
    parent: dict[tuple[int, int], tuple[int, int] | None] = {}
    frontier = []
    for y in starts:
        parent[(0, y)] = None
        frontier.append((0, y))
    goal = None
    while frontier and goal is None:
        nxt = []
        for n, y in frontier:
            if y == e and n >= L and cycle_in_H:
                goal = (n, y)
                break
            for z in preds.get(y, []):
                m = n + 1
                st = (norm(m), z)
                if st not in parent and coset_ok(m, z):
                    parent[st] = (n, y)
                    nxt.append(st)
        frontier = nxt
    if goal is None:
        return None
    seq = []
    st = goal
    while st is not None:
        seq.append(st[1])
        st = parent[st]
    seq.reverse()
    return RegressiveTrajectory(tuple(seq[:-1]), (e,))


# -- tidying procedure ---------------------------------------------------------------


def levi_set(inst: FiniteInstance, U: int) -> int:
    """{x : x = α^m(y) for some y ∈ U_+, m ≥ 1, and α^n(x) ∈ U_- for some n ≥ 1}."""
    G = inst.G
    Up, Um = inst.plus_part(U), inst.minus_part(U)
    reach = 0
    cur = Up
    for _ in range(G.order + 1):
        cur = inst.image(cur)
        reach |= cur
    n = G.order
    # U_- is forward invariant, so "some n" is the same as "n = |G|"
    return G.mask_of(x for x in G.elements(reach) if Um >> inst.apply(x, n) & 1)


def tidying_steps(inst: FiniteInstance, U: int, l_max: int = DEFAULT_L_MAX) -> list[int]:
    """[tidy-above stage, L_U, Ũ, Ũ L_U] following the four-step procedure literally."""
    G = inst.G
    V, _ = tidy_above(inst, U, l_max)
    L = levi_set(inst, V)
    LV = G.product_set(L, V)
    Ut = G.mask_of(x for x in G.elements(V) if G.product_set(1 << x, L) & ~LV == 0)
    result = G.product_set(Ut, L)
    if not G.is_subgroup(result):
        raise TidyError("tidying procedure produced a non-subgroup")
    return [V, L, Ut, result]


# -- subgroups and quotients as instances ---------------------------------------------------


def restrict(inst: FiniteInstance, H: int) -> FiniteInstance:
    G = inst.G
    if inst.image(H) & ~H:
        raise NotInvariant("α(H) is not contained in H")
    els = G.elements(H)
    pos = {x: i for i, x in enumerate(els)}
    table = [[pos[G.table[a][b]] for b in els] for a in els]
    sub = group_from_table(table, f"{G.name}|{H:#x}", [G.labels[x] for x in els])
    return FiniteInstance(sub, [pos[inst.alpha[x]] for x in els])


def quotient(inst: FiniteInstance, H: int) -> FiniteInstance:
    G = inst.G
    if not G.is_normal(H):
        raise NotInvariant("H is not normal")
    if inst.image(H) & ~H:
        raise NotInvariant("α(H) is not contained in H")
    cosets: list[int] = []
    where = {}
    for g in range(G.order):
        if g not in where:
            C = G.product_set(1 << g, H)
            for x in G.elements(C):
                where[x] = len(cosets)
            cosets.append(C)
    reps = [G.elements(C)[0] for C in cosets]
    table = [[where[G.table[a][b]] for b in reps] for a in reps]
    Q = group_from_table(table, f"{G.name}/{H:#x}", [G.labels[r] + "H" for r in reps])
    return FiniteInstance(Q, [where[inst.alpha[r]] for r in reps])


def invariant_subgroups(inst: FiniteInstance) -> list[int]:
    return [H for H in all_subgroups(inst.G) if inst.image(H) & ~H == 0]


def catalog_instances(names: Sequence[str] = CATALOG) -> list[FiniteInstance]:
    out = []
    for name in names:
        G = build_group(name)
        for a in all_endomorphisms(G):
            out.append(FiniteInstance(G, a))
    return out


def parse_mask(G: FiniteGroup, payload) -> int:
    """Subgroup from a list of element labels or indices."""
    if isinstance(payload, int):
        return payload
    idx = {l: i for i, l in enumerate(G.labels)}
    out = 0
    for x in payload:
        if isinstance(x, int):
            out |= 1 << x
        elif str(x) in idx:
            out |= 1 << idx[str(x)]
        else:
            raise ValueError(f"unknown element {x!r}")
    return out
