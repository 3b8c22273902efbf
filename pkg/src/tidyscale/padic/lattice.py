"""Z_p-lattices in Q_p^n with exact rational generators.

A lattice is stored as the Z_(p)-span of finitely many rational vectors, which
has the same Z_p-closure; two finitely generated Z_(p)-modules are equal iff
their Z_p-closures are, so canonical forms decide equality exactly.

Canonical form (row echelon over the discrete valuation ring Z_(p)):

* each basis row has a pivot column with entry exactly ``p**k``;
* entries left of the pivot vanish, as do entries of later rows in earlier
  pivot columns;
* entries of a row in a *later* row's pivot column are reduced to the canonical
  residue of Q_p / p^k Z_p (an element of Z[1/p]).

Full-rank lattices therefore only carry p-power denominators; the prime-to-p
content of generators is absorbed by unit rescaling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..core import InfiniteIndex, NotASubgroup
from .arith import Matrix, canonical_residue, matvec, valuation


class LatticeError(ValueError):
    pass


class NotASubgroupError(LatticeError, NotASubgroup):
    """Raised when an index is requested for H not contained in K."""


class InfiniteIndexError(LatticeError, InfiniteIndex):
    """Raised when H is not open in K (rank deficiency)."""


def _echelon(rows: list[list[Fraction]], p: int) -> tuple[list[list[Fraction]], list[int], list[int]]:
    """Echelonize over Z_(p). Returns (rows, pivot columns, pivot exponents)."""
    M = [list(r) for r in rows if any(x != 0 for x in r)]
    if not M:
        return [], [], []
    n = len(M[0])
    out_rows: list[list[Fraction]] = []
    pivots: list[int] = []
    exps: list[int] = []
    for c in range(n):
        best, best_v = None, None
        for i, r in enumerate(M):
            if r[c] != 0:
                v = valuation(r[c], p)
                if best_v is None or v < best_v:
                    best, best_v = i, v
        if best is None:
            continue
        prow = M.pop(best)
        scale = Fraction(p) ** best_v / prow[c]
        prow = [x * scale for x in prow]
        nxt = []
        for r in M:
            if r[c] != 0:
                f = r[c] / prow[c]
                r = [x - f * y for x, y in zip(r, prow)]
            if any(x != 0 for x in r):
                nxt.append(r)
        M = nxt
        out_rows.append(prow)
        pivots.append(c)
        exps.append(best_v)
        if not M:
            break
    # back-reduce entries above each pivot to canonical residues
    for i in range(len(out_rows)):
        c, k = pivots[i], exps[i]
        for j in range(i):
            a = out_rows[j][c]
            if a == 0:
                continue
            red = canonical_residue(a, k, p)
            if red != a:
                t = (a - red) / Fraction(p) ** k
                out_rows[j] = [x - t * y for x, y in zip(out_rows[j], out_rows[i])]
    return out_rows, pivots, exps


@dataclass(frozen=True)
class Lattice:
    """Finitely generated Z_p-submodule of Q_p^n in canonical echelon form."""

    p: int
    dim: int
    rows: tuple[tuple[Fraction, ...], ...]
    pivots: tuple[int, ...]
    exponents: tuple[int, ...]

    @classmethod
    def span(cls, p: int, dim: int, gens: Iterable[Sequence]) -> "Lattice":
        gens = [[Fraction(x) for x in g] for g in gens]
        for g in gens:
            if len(g) != dim:
                raise LatticeError(f"generator of length {len(g)} in dimension {dim}")
        rows, piv, exps = _echelon(gens, p)
        return cls(p, dim, tuple(tuple(r) for r in rows), tuple(piv), tuple(exps))

    @classmethod
    def standard(cls, p: int, dim: int, shift: int = 0) -> "Lattice":
        """p^shift Z_p^dim."""
        return cls.span(p, dim, [[Fraction(p) ** shift if i == j else 0 for j in range(dim)] for i in range(dim)])

    @classmethod
    def zero(cls, p: int, dim: int) -> "Lattice":
        return cls(p, dim, (), (), ())

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def is_open(self) -> bool:
        return self.rank == self.dim

    def __contains__(self, v: Sequence) -> bool:
        return lattice_sum(self, Lattice.span(self.p, self.dim, [v])) == self

    def contains(self, other: "Lattice") -> bool:
        return lattice_sum(self, other) == self

    def scaled(self, k: int) -> "Lattice":
        f = Fraction(self.p) ** k
        return Lattice.span(self.p, self.dim, [[x * f for x in r] for r in self.rows])

    def log_covolume(self) -> int:
        """Sum of pivot exponents; the index in a same-rank lattice is p^(difference)."""
        return sum(self.exponents)

    def describe(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.rows]


def image(A: Matrix, L: Lattice) -> Lattice:
    return Lattice.span(L.p, L.dim, [matvec(A, r) for r in L.rows])


def lattice_sum(L: Lattice, M: Lattice) -> Lattice:
    return Lattice.span(L.p, L.dim, list(L.rows) + list(M.rows))


def _zassenhaus(p: int, dim: int, top: list[list[Fraction]], second: list[list[Fraction]]) -> Lattice:
    """Rows of the echelon form of [top] whose first ``dim`` entries vanish."""
    rows, piv, _ = _echelon(top + second, p)
    keep = [r[dim:] for r, c in zip(rows, piv) if c >= dim]
    return Lattice.span(p, dim, keep)


def intersect(L: Lattice, M: Lattice) -> Lattice:
    n = L.dim
    top = [list(r) + list(r) for r in L.rows]
    bot = [list(r) + [Fraction(0)] * n for r in M.rows]
    return _zassenhaus(L.p, n, top, bot)


def preimage_meet(A: Matrix, L: Lattice, M: Lattice) -> Lattice:
    """{x in M : A x in L}; compact even when A is singular."""
    n = L.dim
    top = [list(matvec(A, m)) + list(m) for m in M.rows]
    bot = [list(l) + [Fraction(0)] * n for l in L.rows]
    return _zassenhaus(L.p, n, top, bot)


def meet_subspace(L: Lattice, basis: Sequence[Sequence[Fraction]]) -> Lattice:
    """L intersected with the Q_p-span of the rational vectors ``basis``."""
    from .arith import rational_kernel

    n = L.dim
    if not basis:
        return Lattice.zero(L.p, n)
    # linear functionals vanishing exactly on span(basis)
    funcs = rational_kernel(tuple(tuple(map(Fraction, b)) for b in basis))
    if not funcs:
        return L
    k = len(funcs)
    top = [[sum((f[j] * r[j] for j in range(n)), Fraction(0)) for f in funcs] + list(r) for r in L.rows]
    rows, piv, _ = _echelon(top, L.p)
    keep = [r[k:] for r, c in zip(rows, piv) if c >= k]
    return Lattice.span(L.p, n, keep)


def meet_coordinates(L: Lattice, coords: Sequence[int]) -> Lattice:
    """L intersected with the coordinate subspace spanned by ``coords``."""
    n = L.dim
    others = [j for j in range(n) if j not in coords]
    order = others + list(coords)
    rows, piv, _ = _echelon([[r[j] for j in order] for r in L.rows], L.p)
    keep = []
    for r, c in zip(rows, piv):
        if c >= len(others):
            v = [Fraction(0)] * n
            for pos, j in enumerate(order):
                v[j] = r[pos]
            keep.append(v)
    return Lattice.span(L.p, n, keep)


def lattice_index(K: Lattice, H: Lattice) -> int:
    """[K : H] for H an open subgroup of K."""
    if not K.contains(H):
        raise NotASubgroupError("H is not contained in K")
    if H.rank != K.rank:
        raise InfiniteIndexError(f"rank {H.rank} sublattice has infinite index in rank {K.rank}")
    return K.p ** (H.log_covolume() - K.log_covolume())
