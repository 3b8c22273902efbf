"""Q_p^n with a rational linear map: scale, tidy lattices and the slope decomposition."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..core import (
    COMPUTED,
    DEFAULT_L_MAX,
    Backend,
    Descriptor,
    DynamicalDecomposition,
    GroupInstance,
    NotComputableError,
    ScaleResult,
    StageTrace,
    TidyError,
    UndecidableInput,
    displacement_index,
    minus_trace,
    tidy_above,
)
from .arith import (
    Matrix,
    det,
    identity,
    inverse,
    is_prime,
    mat,
    matmul,
    matpow,
    matvec,
    pmul,
    rational_kernel,
    rational_reconstruct,
    rational_row_basis,
    to_residue,
    valuation,
)
from .lattice import Lattice, image, intersect, lattice_index, meet_coordinates, meet_subspace, preimage_meet
from .poly import NewtonPolygon, charpoly, newton_polygon, slope_factors
from .subspace import PadicSubspace, PrecisionError


STAGE_BUDGET = 20
MAX_DOUBLINGS = 6


class PrecisionEscalationFailure(TidyError):
    pass


def _fmt(x: Fraction) -> str:
    return str(Fraction(x))


class PadicInstance(GroupInstance):
    """The group Q_p^n with the endomorphism x -> A x."""

    backend = Backend.PADIC

    def __init__(self, p: int, A: Sequence[Sequence], name: str = "", precision: int | None = None):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        A = mat(A)
        if any(len(r) != len(A) for r in A):
            raise ValueError("matrix must be square")
        self.p = p
        self.A: Matrix = A
        self.n = len(A)
        self.name = name
        # starting Hensel precision N0; None picks one from the polygon
        self.precision = precision

    def __repr__(self):
        return f"PadicInstance(p={self.p}, A={[[_fmt(x) for x in r] for r in self.A]})"

    def __eq__(self, other):
        return isinstance(other, PadicInstance) and (self.p, self.A) == (other.p, other.A)

    def __hash__(self):
        return hash((self.p, self.A))

    def __getstate__(self):
        return {"p": self.p, "A": self.A, "n": self.n, "name": self.name, "precision": self.precision}

    def __setstate__(self, state):
        self.__dict__.update(state)

    # -- descriptors ---------------------------------------------------------

    @property
    def is_automorphism(self) -> bool:
        return det(self.A) != 0

    @property
    def is_compact(self) -> bool:
        return self.n == 0

    def key(self) -> str:
        body = self.name or ";".join(",".join(_fmt(x) for x in r) for r in self.A)
        return f"padic/p={self.p}/{body}"

    def describe(self) -> dict:
        return {
            "backend": "padic",
            "prime": self.p,
            "matrix": [[_fmt(x) for x in r] for r in self.A],
            "name": self.name,
        }

    def describe_subgroup(self, U: Lattice):
        return {"lattice_basis": U.describe(), "rank": U.rank}

    @property
    def denominator_exponent(self) -> int:
        """Least t with p^t A integral at p."""
        vals = [valuation(x, self.p) for r in self.A for x in r if x != 0]
        return max([0] + [-v for v in vals])

    @functools.cached_property
    def char_poly(self) -> list[Fraction]:
        return charpoly(self.A)

    @functools.cached_property
    def polygon(self) -> NewtonPolygon:
        return newton_polygon(self.char_poly, self.p)

    def newton_scale(self) -> int:
        return self.p ** self.polygon.expansion_exponent()

    # -- primitives ----------------------------------------------------------

    def whole(self) -> Lattice:
        return Lattice.standard(self.p, self.n)

    def trivial(self) -> Lattice:
        return Lattice.zero(self.p, self.n)

    def lattice(self, gens) -> Lattice:
        return Lattice.span(self.p, self.n, gens)

    def image(self, U: Lattice) -> Lattice:
        return image(self.A, U)

    def preimage_meet(self, V: Lattice, M: Lattice) -> Lattice:
        return preimage_meet(self.A, V, M)

    def intersect(self, U: Lattice, V: Lattice) -> Lattice:
        return intersect(U, V)

    def contains(self, K: Lattice, H: Lattice) -> bool:
        return K.contains(H)

    def index(self, K: Lattice, H: Lattice) -> int:
        return lattice_index(K, H)

    # -- strategies ----------------------------------------------------------

    def split(self, N0: int | None = None) -> "SlopeSplit":
        if N0 is None:
            return _cached_split(self)
        return slope_split(self, N0)

    def scale_result(self, l_max: int = DEFAULT_L_MAX) -> ScaleResult:
        return scale_padic(self)

    def tidy_above_certificate(self, V: Lattice) -> bool:
        # nub is trivial on vector groups, so tidy above is the same as tidy
        return displacement_index(self, V) == self.scale_result().value

    def decompose(self) -> DynamicalDecomposition:
        return decompose_padic(self)

    def tidying_procedure(self, U: Lattice, l_max: int = DEFAULT_L_MAX) -> Lattice:
        V, _ = tidy_above(self, U, l_max)
        if displacement_index(self, V) != self.scale_result().value:
            raise TidyError("tidy-above stage is not minimizing")
        return V

    def core_part(self, K: Lattice) -> Lattice:
        return core_part_padic(self, K)

    def converges_mod(self, trajectory, H) -> bool:
        return converges_mod_padic(self, trajectory, H)


# -- slope decomposition ------------------------------------------------------


@dataclass(frozen=True)
class SlopeSplit:
    """Invariant subspaces by sign of eigenvalue valuation.

    ``less``: |λ| < 1 including the generalized 0-eigenspace, ``equal``: |λ| = 1,
    ``greater``: |λ| > 1. ``par`` and ``par_minus`` are computed from their own
    polynomials, not as sums, so that the sums can be checked against them.
    ``exact`` maps block names to rational bases when those could be
    reconstructed and verified.
    """

    p: int
    n: int
    precision: int
    polygon: NewtonPolygon
    less: PadicSubspace | None
    equal: PadicSubspace | None
    greater: PadicSubspace | None
    par: PadicSubspace | None
    par_minus: PadicSubspace | None
    certified: bool
    exact: tuple[tuple[str, tuple[tuple[Fraction, ...], ...]], ...] = ()

    @property
    def dims(self) -> tuple[int, int, int]:
        return (self.polygon.count(1), self.polygon.count(0), self.polygon.count(-1))

    def exact_basis(self, name: str):
        return dict(self.exact).get(name)

    @property
    def is_exact(self) -> bool:
        return all(self.exact_basis(k) is not None for k in ("less", "equal", "greater"))

    @property
    def block_precision(self) -> float:
        if self.is_exact:
            return float("inf")
        return min(b.prec for b in (self.less, self.equal, self.greater))


def eval_poly_scaled(A: Matrix, coeffs: Sequence[int], p: int, N: int) -> list[list[int]]:
    """p^(tD) * f(A) mod p^N for A = A_int / p^t; a scalar multiple of f(A)."""
    n = len(A)
    t = max([0] + [-valuation(x, p) for r in A for x in r if x != 0])
    scale = Fraction(p) ** t
    mod = p**N
    Ai = [[to_residue(x * scale, p, N) for x in r] for r in A]
    D = len(coeffs) - 1
    out = [[0] * n for _ in range(n)]
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    for i, c in enumerate(coeffs):
        if i:
            P = [[sum(P[r][k] * Ai[k][c2] for k in range(n)) % mod for c2 in range(n)] for r in range(n)]
        f = (c * p ** (t * (D - i))) % mod
        if f:
            for r in range(n):
                for c2 in range(n):
                    out[r][c2] = (out[r][c2] + f * P[r][c2]) % mod
    return out


def _image_subspace(A: Matrix, poly: Sequence[int], p: int, N: int, rank: int) -> PadicSubspace:
    n = len(A)
    if rank == 0:
        return PadicSubspace.zero(p, n, N)
    if rank == n:
        return PadicSubspace.full(p, n, N)
    M = eval_poly_scaled(A, poly, p, N)
    cols = [[M[i][j] for i in range(n)] for j in range(n)]
    return PadicSubspace.from_vectors(p, n, cols, N, rank)


def _precision_start(inst: PadicInstance) -> int:
    vals = [valuation(c, inst.p) for c in inst.char_poly if c != 0]
    spread = max(vals) - min(vals)
    return max(8, 2 * (spread + inst.n))


def _sign_ok(poly: NewtonPolygon, sign: int) -> bool:
    return poly.count(sign) == sum(m for _, m in poly.segments) + poly.zero_roots


def restriction_matrix(A: Matrix, basis: Sequence[Sequence], pivots: Sequence[int]) -> Matrix:
    """Matrix of A on span(basis) in the coordinates read off at the pivot columns."""
    k = len(basis)
    imgs = [matvec(A, b) for b in basis]
    return tuple(tuple(imgs[j][pivots[i]] for j in range(k)) for i in range(k))


def _try_exact(A: Matrix, sub: PadicSubspace, sign: int) -> tuple[tuple[Fraction, ...], ...] | None:
    """Rational basis equal to ``sub``, verified exactly, or None."""
    p = sub.p
    if sub.rank == 0:
        return ()
    mod = p**sub.prec
    rows = []
    for r in sub.rows:
        row = []
        for x in r:
            q = rational_reconstruct(x, mod)
            if q is None or valuation(q, p) < 0:
                return None
            row.append(q)
        rows.append(tuple(row))
    # invariance: each image lies in the rational span
    k = len(rows)
    for b in rows:
        img = matvec(A, b)
        if len(rational_row_basis(list(rows) + [list(img)])) != k:
            return None
    C = restriction_matrix(A, rows, sub.pivots)
    if not _sign_ok(newton_polygon(charpoly(C), p), sign):
        return None
    return tuple(rows)


def slope_split(inst: PadicInstance, N0: int | None = None, max_doublings: int = MAX_DOUBLINGS) -> SlopeSplit:
    """Hensel-lift the slope factors of the charpoly and take images of cofactors.

    The subspace of eigenvalues of one valuation sign is the image of the
    product of the other slope factors evaluated at A. Precision starts at N0
    and doubles until every image has the rank predicted by the polygon.
    """
    p, n, A = inst.p, inst.n, inst.A
    NP = inst.polygon
    dl, de, dg = NP.count(1), NP.count(0), NP.count(-1)
    N = N0 if N0 is not None else _precision_start(inst)
    cp = inst.char_poly
    for _ in range(max_doublings + 1):
        try:
            f = slope_factors(cp, p, N)
            mod = p**N
            zp = pmul(f["zero"], f["pos"], mod)
            less = _image_subspace(A, pmul(f["neg"], f["unit"], mod), p, N, dl)
            equal = _image_subspace(A, pmul(zp, f["neg"], mod), p, N, de)
            greater = _image_subspace(A, pmul(zp, f["unit"], mod), p, N, dg)
            par = _image_subspace(A, f["neg"], p, N, dl + de)
            par_minus = _image_subspace(A, zp, p, N, de + dg)
            less.plus(equal, dl + de).plus(greater, n)
        except (PrecisionError, ValueError):
            N *= 2
            continue
        exact = []
        for name, sub, sign in (("less", less, 1), ("equal", equal, 0), ("greater", greater, -1)):
            rows = _try_exact(A, sub, sign)
            if rows is not None:
                exact.append((name, rows))
        return SlopeSplit(p, n, N, NP, less, equal, greater, par, par_minus, True, tuple(exact))
    return SlopeSplit(p, n, N, NP, None, None, None, None, None, False)


@functools.lru_cache(maxsize=4096)
def _cached_split(inst: PadicInstance) -> SlopeSplit:
    return slope_split(inst, inst.precision)


# -- block coordinates ----------------------------------------------------------


@dataclass(frozen=True)
class Blocks:
    """Basis adapted to the slope split and the block matrices of A in it."""

    split: SlopeSplit
    bases: tuple[tuple[tuple[Fraction, ...], ...], ...]  # less, equal, greater
    pivots: tuple[tuple[int, ...], ...]
    C: tuple[Matrix, Matrix, Matrix]
    T: Matrix  # columns are the basis vectors, in block order
    T_inv: Matrix
    precision: float

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(b) for b in self.bases)  # type: ignore[return-value]

    def coords(self, which: int) -> list[int]:
        a = sum(self.sizes[:which])
        return list(range(a, a + self.sizes[which]))

    def block_diagonal(self) -> Matrix:
        n = sum(self.sizes)
        M = [[Fraction(0)] * n for _ in range(n)]
        for w in range(3):
            cs = self.coords(w)
            for i, ci in enumerate(cs):
                for j, cj in enumerate(cs):
                    M[ci][cj] = self.C[w][i][j]
        return mat(M)

    def to_block(self, L: Lattice) -> Lattice:
        return image(self.T_inv, L)

    def from_block(self, L: Lattice) -> Lattice:
        return image(self.T, L)


def blocks_of(inst: PadicInstance, split: SlopeSplit) -> Blocks:
    if not split.certified:
        raise NotComputableError("slope split is not certified")
    bases, pivs, Cs = [], [], []
    for name in ("less", "equal", "greater"):
        sub: PadicSubspace = getattr(split, name)
        ex = split.exact_basis(name)
        rows = ex if ex is not None else tuple(tuple(Fraction(x) for x in r) for r in sub.rows)
        bases.append(tuple(rows))
        pivs.append(tuple(sub.pivots))
        Cs.append(restriction_matrix(inst.A, rows, sub.pivots) if rows else ())
    cols = [v for b in bases for v in b]
    n = inst.n
    T = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return Blocks(split, tuple(bases), tuple(pivs), tuple(Cs), T, inverse(T), split.block_precision)  # type: ignore[arg-type]


def _lattice_bounds(L: Lattice) -> tuple[int, int]:
    """(D, M) with p^M Z_p^n ⊆ L ⊆ p^-D Z_p^n for a full-rank lattice."""
    p = L.p
    vals = [valuation(x, p) for r in L.rows for x in r if x != 0]
    D = max([0] + [-v for v in vals])
    Binv = inverse(tuple(L.rows))
    ivals = [valuation(x, p) for r in Binv for x in r if x != 0]
    M = max([0] + [-v for v in ivals])
    return D, M


def blocks_for(inst: PadicInstance, needed: int = 0) -> Blocks:
    """Blocks whose precision is at least ``needed`` digits (escalating the split)."""
    split = inst.split()
    if not split.certified:
        raise PrecisionEscalationFailure("slope factors could not be separated")
    N = split.precision
    for _ in range(MAX_DOUBLINGS + 1):
        if split.block_precision >= needed:
            return blocks_of(inst, split)
        N *= 2
        split = slope_split(inst, N)
        if not split.certified:
            break
    raise PrecisionEscalationFailure(f"could not reach {needed} digits of precision")


# -- tidy lattices ------------------------------------------------------------


def _module_span(B: Matrix, k: int) -> list[list[Fraction]]:
    """Generators of sum_j B^j Z_p^k for j < k (the Z_p[B]-module on the unit vectors)."""
    gens = []
    P = identity(k)
    for _ in range(k):
        for i in range(k):
            gens.append([P[r][i] for r in range(k)])
        P = matmul(B, P)
    return gens


def _adapted_from_blocks(inst: PadicInstance, bl: Blocks) -> Lattice:
    n, p = inst.n, inst.p
    gens: list[list[Fraction]] = []
    for w in range(3):
        k = bl.sizes[w]
        if k == 0:
            continue
        B = bl.C[w] if w < 2 else inverse(bl.C[w])
        for g in _module_span(B, k):
            gens.append([sum((bl.bases[w][i][r] * g[i] for i in range(k)), Fraction(0)) for r in range(n)])
    vdet = valuation(det(bl.T), p)
    f = Fraction(p) ** vdet
    gens += [[f if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    return Lattice.span(p, n, gens)


@dataclass(frozen=True)
class AdaptedLattice:
    lattice: Lattice
    displacement: int
    scale: int
    precision: float

    @property
    def certified(self) -> bool:
        return self.displacement == self.scale


def adapted_tidy_lattice(inst: PadicInstance) -> AdaptedLattice:
    return _adapted_cached(inst)


@functools.lru_cache(maxsize=4096)
def _adapted_cached(inst: PadicInstance) -> AdaptedLattice:
    s = inst.newton_scale()
    split = inst.split()
    if not split.certified:
        raise PrecisionEscalationFailure("slope factors could not be separated")
    for _ in range(MAX_DOUBLINGS + 1):
        bl = blocks_of(inst, split)
        L = _adapted_from_blocks(inst, bl)
        d = displacement_index(inst, L)
        if d == s:
            return AdaptedLattice(L, d, s, bl.precision)
        if split.is_exact:
            break
        split = slope_split(inst, split.precision * 2)
        if not split.certified:
            break
    raise PrecisionEscalationFailure(f"adapted lattice displacement {d} does not reach scale {s}")


@dataclass(frozen=True)
class ChartCheck:
    """Block-coordinate test of the three-factor tidy structure of a lattice."""

    splits: bool
    less_invariant: bool
    equal_stable: bool
    greater_expanding: bool

    @property
    def ok(self) -> bool:
        return self.splits and self.less_invariant and self.equal_stable and self.greater_expanding


def chart_check(inst: PadicInstance, U: Lattice) -> ChartCheck:
    """U = (U∩V<)(U∩V=)(U∩V>) with A(U∩V<) ⊆ U∩V<, A(U∩V=) = U∩V=, A(U∩V>) ⊇ U∩V>."""
    if not U.is_open:
        raise ValueError("chart test needs an open lattice")
    bl = blocks_for(inst)
    if bl.precision != float("inf"):
        Ub = bl.to_block(U)
        D, M = _lattice_bounds(Ub)
        vdet = valuation(det(bl.T), inst.p)
        needed = vdet + 2 * D + M + inst.denominator_exponent + 2
        bl = blocks_for(inst, needed)
    Ub = bl.to_block(U)
    parts = [meet_coordinates(Ub, bl.coords(w)) for w in range(3)]
    total = parts[0]
    for q in parts[1:]:
        total = Lattice.span(inst.p, inst.n, list(total.rows) + list(q.rows))
    Dm = bl.block_diagonal()
    img = [image(Dm, q) for q in parts]
    return ChartCheck(
        splits=total == Ub,
        less_invariant=parts[0].contains(img[0]),
        equal_stable=img[1] == parts[1],
        greater_expanding=img[2].contains(parts[2]),
    )


def stage_stabilized_scale(inst: PadicInstance, budget: int = STAGE_BUDGET) -> tuple[int, StageTrace]:
    """Displacement of minus_stage(Z_p^n, budget), with the full trace."""
    trace = minus_trace(inst, inst.whole(), budget)
    return trace.records[-1].index, trace


@functools.lru_cache(maxsize=4096)
def scale_padic(inst: PadicInstance) -> ScaleResult:
    s = inst.newton_scale()
    try:
        ad = adapted_tidy_lattice(inst)
    except PrecisionEscalationFailure:
        value, trace = stage_stabilized_scale(inst)
        V = trace.records[-1].subgroup
        return ScaleResult(value, V, value, "stage-stabilization", (("decomposition", "uncertified"), ("newton_value", s)))
    return ScaleResult(s, ad.lattice, ad.displacement, "newton-polygon", (("polygon_slopes", _slopes(inst.polygon)),))


def _slopes(poly: NewtonPolygon) -> list[tuple[str, int]]:
    return [(str(s), m) for s, m in poly.slope_multiset()]


# -- decomposition ------------------------------------------------------------------


def _sub_descriptor(sub: PadicSubspace, exact_rows=None, closed=True, note="") -> Descriptor:
    payload = {"rank": sub.rank, "precision": sub.prec, "pivots": list(sub.pivots), "basis": [[str(x) for x in r] for r in sub.describe()]}
    if exact_rows is not None:
        payload = {"rank": len(exact_rows), "exact": True, "basis": [[_fmt(x) for x in r] for r in exact_rows]}
    return Descriptor(COMPUTED, "subspace", payload, closed, note)


def decompose_padic(inst: PadicInstance) -> DynamicalDecomposition:
    from ..core import not_computed

    split = inst.split()
    if not split.certified:
        nc = not_computed("slope split not certified")
        return DynamicalDecomposition("padic", *([nc] * 8))
    zero = Descriptor(COMPUTED, "trivial", {"rank": 0}, True)
    return DynamicalDecomposition(
        "padic",
        con=_sub_descriptor(split.less, split.exact_basis("less")),
        con_minus=_sub_descriptor(split.greater, split.exact_basis("greater")),
        par=_sub_descriptor(split.par),
        par_minus=_sub_descriptor(split.par_minus),
        lev=_sub_descriptor(split.equal, split.exact_basis("equal")),
        nub=zero,
        bik=zero,
        big_cell=Descriptor(COMPUTED, "whole", {"rank": inst.n}, True, "con + lev + con- is a direct sum"),
    )


# -- exact rational helpers ------------------------------------------------------------


def is_invariant_subspace(A: Matrix, basis: Sequence[Sequence]) -> bool:
    basis = rational_row_basis(basis)
    k = len(basis)
    return all(len(rational_row_basis(list(basis) + [list(matvec(A, b))])) == k for b in basis)


def eventual_image(A: Matrix) -> list[list[Fraction]]:
    n = len(A)
    M = matpow(A, n)
    return rational_row_basis([list(r) for r in zip(*M)]) if n else []


def eventual_kernel(A: Matrix) -> list[list[Fraction]]:
    n = len(A)
    return rational_kernel(matpow(A, n)) if n else []


def subspace_image(A: Matrix, basis: Sequence[Sequence], k: int = 1) -> list[list[Fraction]]:
    Ak = matpow(A, k)
    return rational_row_basis([list(matvec(Ak, b)) for b in basis])


@dataclass(frozen=True)
class SubspaceSplit:
    """A = [[A_H, *], [0, A_Q]] in a basis starting with a basis of H."""

    H: tuple[tuple[Fraction, ...], ...]
    complement: tuple[int, ...]  # standard coordinates completing H
    A_H: Matrix
    A_Q: Matrix
    P: Matrix


def split_by_subspace(A: Matrix, H: Sequence[Sequence]) -> SubspaceSplit:
    """Restriction and quotient matrices for an A-invariant rational subspace H."""
    n = len(A)
    Hb = rational_row_basis(H)
    if not is_invariant_subspace(A, Hb):
        raise ValueError("subspace is not invariant")
    cols = [list(h) for h in Hb]
    comp = []
    for j in range(n):
        e = [Fraction(int(i == j)) for i in range(n)]
        if len(rational_row_basis(cols + [e])) > len(cols):
            cols.append(e)
            comp.append(j)
    P = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    B = matmul(inverse(P), matmul(A, P))
    h = len(Hb)
    A_H = tuple(tuple(B[i][j] for j in range(h)) for i in range(h))
    A_Q = tuple(tuple(B[i][j] for j in range(h, n)) for i in range(h, n))
    return SubspaceSplit(tuple(tuple(r) for r in Hb), tuple(comp), A_H, A_Q, P)


def krylov_polygon(A: Matrix, x: Sequence[Fraction], p: int) -> NewtonPolygon | None:
    """Newton polygon of the minimal polynomial of x under A (None for x = 0)."""
    x = [Fraction(v) for v in x]
    if all(v == 0 for v in x):
        return None
    vecs = [x]
    while True:
        nxt = list(matvec(A, vecs[-1]))
        if len(rational_row_basis(vecs + [nxt])) == len(vecs):
            break
        vecs.append(nxt)
    k = len(vecs)
    # coefficients of A^k x in terms of x, ..., A^{k-1} x
    Mt = [[vecs[j][i] for j in range(k)] + [nxt[i]] for i in range(len(x))]
    R = rational_row_basis(Mt)
    coeffs = [Fraction(0)] * k
    for r in R:
        piv = next(i for i, v in enumerate(r) if v != 0)
        if piv < k:
            coeffs[piv] = r[k]
    poly = [-c for c in coeffs] + [Fraction(1)]
    return newton_polygon(poly, p)


def _quotient_vector(split: SubspaceSplit, x: Sequence[Fraction]) -> list[Fraction]:
    y = matvec(inverse(split.P), x)
    return list(y[len(split.H):])


def converges_mod_padic(inst: PadicInstance, trajectory, H) -> bool:
    """Decide convergence to 0 modulo an A-invariant rational subspace H.

    ``trajectory`` is ("orbit", x) or ("regressive", x); the regressive
    trajectory of a linear map is unique when it exists (it lives in the
    eventual image, where A is bijective). The answer reads off the valuations
    of the eigenvalues of A on the cyclic subspace generated by x mod H.
    """
    kind, x = trajectory
    x = [Fraction(v) for v in x]
    H = [] if H is None or isinstance(H, Lattice) and H.rank == 0 else H
    if isinstance(H, Lattice):
        raise UndecidableInput("modulus must be an invariant rational subspace")
    if H:
        sp = split_by_subspace(inst.A, H)
        A, y = sp.A_Q, _quotient_vector(sp, x)
    else:
        A, y = inst.A, x
    if kind == "orbit":
        poly = krylov_polygon(A, y, inst.p)
        return poly is None or _sign_ok(poly, 1)
    if kind == "regressive":
        E = eventual_image(inst.A)
        if len(rational_row_basis(E + [x])) != len(E):
            raise UndecidableInput("element has no regressive trajectory")
        poly = krylov_polygon(A, y, inst.p)
        return poly is None or _sign_ok(poly, -1)
    raise UndecidableInput(f"unknown trajectory kind {kind!r}")


def in_con_minus_mod(inst: PadicInstance, x: Sequence, H: Sequence[Sequence]) -> bool:
    """x ∈ con⁻(α, H) for an invariant rational subspace H (α(H) ⊆ H)."""
    E = eventual_image(inst.A)
    x = [Fraction(v) for v in x]
    if len(rational_row_basis(E + [x])) != len(E):
        return False
    # trajectories live in E; convergence mod H there is convergence mod the stable part of H
    Hst = subspace_image(inst.A, H, inst.n) if H else []
    return converges_mod_padic(inst, ("regressive", x), Hst)


def core_part_padic(inst: PadicInstance, K: Lattice) -> Lattice:
    """Elements of K on two-sided trajectories inside K; they all lie in the lev block."""
    split = inst.split()
    if not split.certified:
        raise NotComputableError("slope split is not certified")
    rows = split.exact_basis("equal")
    if rows is None:
        raise NotComputableError("lev block is not a rational subspace; exact meet unavailable")
    L = meet_subspace(K, rows) if rows else Lattice.zero(inst.p, inst.n)
    for _ in range(10_000):
        nxt = intersect(preimage_meet(inst.A, L, L), image(inst.A, L))
        if nxt == L:
            return L
        L = nxt
    raise NotComputableError("core part iteration did not stabilize")


def restricted_instance(inst: PadicInstance, sub: PadicSubspace, exact_rows=None, name: str = "") -> PadicInstance:
    """alpha restricted to an invariant subspace, in its saturated basis."""
    rows = exact_rows if exact_rows is not None else tuple(tuple(Fraction(x) for x in r) for r in sub.rows)
    return PadicInstance(inst.p, restriction_matrix(inst.A, rows, sub.pivots), name)
