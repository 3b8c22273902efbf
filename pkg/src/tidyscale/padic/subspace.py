"""Subspaces of Q_p^n known to finite p-adic precision.

A subspace V is stored through the saturated lattice V ∩ Z_p^n: a basis whose
rows are the identity on a set of pivot columns, with the remaining entries in
Z/p^prec. The pivot columns are chosen canonically (leftmost pivots of the
reduction mod p), so two subspaces agree to precision N exactly when their
pivots agree and their rows agree mod p^N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import Matrix, to_residue, valuation


class PrecisionError(ArithmeticError):
    """Not enough p-adic digits to decide the requested quantity."""


def _vp(a: int, p: int, cap: int) -> int:
    if a == 0:
        return cap
    v = 0
    while a % p == 0 and v < cap:
        a //= p
        v += 1
    return v


def _saturate(rows: list[list[int]], p: int, prec: int, rank: int | None = None):
    """Full-pivot elimination mod p^prec.

    Returns (basis rows, pivot columns, precision left). Each division by a
    pivot p^v costs v digits. With ``rank`` given, exactly that many pivots are
    taken and the remainder must vanish at the surviving precision.
    """
    M = [[x % p**prec for x in r] for r in rows]
    cur = prec
    basis: list[list[int]] = []
    pivots: list[int] = []
    while M:
        if rank is not None and len(basis) == rank:
            break
        best = None
        for i, r in enumerate(M):
            for j, x in enumerate(r):
                if x % p**cur:
                    v = _vp(x, p, cur)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        if rank is None and v * 2 >= cur:
            # too close to the noise floor to call it a pivot
            break
        cur -= v
        mod = p**cur
        prow = M.pop(i)
        unit = (prow[j] // p**v) % mod
        inv = pow(unit, -1, mod)
        prow = [((x // p**v) * inv) % mod if x % p**v == 0 else None for x in prow]
        if any(x is None for x in prow):
            # entries of lower valuation than the pivot cannot exist
            raise AssertionError("pivot is not of minimal valuation")
        M = [[(x - r[j] * y) % mod for x, y in zip(r, prow)] for r in M]
        basis = [[x % mod for x in b] for b in basis]
        basis.append(prow)
        pivots.append(j)
    if rank is not None:
        if len(basis) < rank:
            raise PrecisionError(f"found {len(basis)} of {rank} independent directions")
        if any(x % p**cur for r in M for x in r):
            raise PrecisionError("remainder does not vanish; rank exceeds expectation")
    mod = p**cur
    # clear the other pivot columns
    for i, c in enumerate(pivots):
        for k in range(len(basis)):
            if k != i and basis[k][c]:
                f = basis[k][c]
                basis[k] = [(x - f * y) % mod for x, y in zip(basis[k], basis[i])]
    return basis, pivots, cur


def _canonical(basis: list[list[int]], p: int, prec: int, n: int):
    """Re-express a saturated basis with identity on the leftmost pivots mod p."""
    r = len(basis)
    mod = p**prec
    M = [list(b) for b in basis]
    pivots: list[int] = []
    row = 0
    for c in range(n):
        if row == r:
            break
        piv = next((i for i in range(row, r) if M[i][c] % p), None)
        if piv is None:
            continue
        M[row], M[piv] = M[piv], M[row]
        inv = pow(M[row][c], -1, mod)
        M[row] = [(x * inv) % mod for x in M[row]]
        for i in range(r):
            if i != row and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % mod for x, y in zip(M[i], M[row])]
        pivots.append(c)
        row += 1
    if row != r:
        raise PrecisionError("basis is not saturated")
    return M, pivots


@dataclass(frozen=True)
class PadicSubspace:
    p: int
    dim: int
    prec: int
    pivots: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.rows)

    @classmethod
    def from_vectors(cls, p: int, dim: int, vectors: Sequence[Sequence], prec: int, rank: int | None = None):
        """Span of p-integral vectors given mod p^prec (or exactly, as rationals)."""
        rows = [[to_residue(x, p, prec) for x in v] for v in vectors]
        if not rows:
            return cls.zero(p, dim, prec)
        basis, _, cur = _saturate(rows, p, prec, rank)
        return cls._build(p, dim, cur, basis)

    @classmethod
    def _build(cls, p, dim, prec, basis):
        if not basis:
            return cls.zero(p, dim, prec)
        rows, piv = _canonical(basis, p, prec, dim)
        return cls(p, dim, prec, tuple(piv), tuple(tuple(r) for r in rows))

    @classmethod
    def zero(cls, p: int, dim: int, prec: int) -> "PadicSubspace":
        return cls(p, dim, prec, (), ())

    @classmethod
    def full(cls, p: int, dim: int, prec: int) -> "PadicSubspace":
        return cls(p, dim, prec, tuple(range(dim)), tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)))

    @classmethod
    def exact(cls, p: int, dim: int, vectors: Sequence[Sequence], prec: int = 64) -> "PadicSubspace":
        """Q-span of rational vectors; the rank is known exactly."""
        from .arith import rational_row_basis

        basis = rational_row_basis(vectors)
        if not basis:
            return cls.zero(p, dim, prec)
        scaled = []
        for b in basis:
            v = min(valuation(x, p) for x in b if x != 0)
            scaled.append([x / Fraction(p) ** v for x in b])
        # extra digits absorb the loss inside the elimination
        slack = prec + sum(max(0, -min(valuation(x, p) for x in b if x != 0)) for b in scaled) + 4 * dim
        basis_i, _, cur = _saturate([[to_residue(x, p, slack) for x in b] for b in scaled], p, slack, len(basis))
        sub = cls._build(p, dim, cur, basis_i)
        return sub.truncate(min(cur, prec + 4 * dim))

    def truncate(self, prec: int) -> "PadicSubspace":
        prec = min(prec, self.prec)
        mod = self.p**prec
        return PadicSubspace(self.p, self.dim, prec, self.pivots, tuple(tuple(x % mod for x in r) for r in self.rows))

    def vectors(self) -> list[list[Fraction]]:
        return [[Fraction(x) for x in r] for r in self.rows]

    def coordinates(self, v: Sequence) -> list:
        """Coordinates of a vector of V in the saturated basis (its pivot entries)."""
        return [v[c] for c in self.pivots]

    def contains(self, v: Sequence, prec: int | None = None) -> bool:
        """Whether a vector (rational, p-integral after scaling) lies in V to the given precision."""
        prec = self.prec if prec is None else min(prec, self.prec)
        vals = [valuation(x, self.p) for x in v if Fraction(x) != 0]
        if not vals:
            return True
        shift = min(vals)
        w = [Fraction(x) / Fraction(self.p) ** shift for x in v]
        # dividing out p^shift costs that many digits of the input
        prec = prec - max(0, shift)
        if prec <= 0:
            # indistinguishable from zero, which lies in every subspace
            return True
        mod = self.p**prec
        wi = [to_residue(x, self.p, prec) for x in w]
        res = list(wi)
        for c, r in zip(self.pivots, self.rows):
            f = wi[c]
            res = [(a - f * b) % mod for a, b in zip(res, r)]
        return all(x == 0 for x in res)

    def same_as(self, other: "PadicSubspace") -> bool:
        if self.rank != other.rank or self.pivots != other.pivots:
            return False
        prec = min(self.prec, other.prec)
        mod = self.p**prec
        return all((a - b) % mod == 0 for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def plus(self, other: "PadicSubspace", rank: int | None = None) -> "PadicSubspace":
        prec = min(self.prec, other.prec)
        rows = [list(r) for r in self.rows + other.rows]
        if not rows:
            return PadicSubspace.zero(self.p, self.dim, prec)
        basis, _, cur = _saturate(rows, self.p, prec, rank)
        return PadicSubspace._build(self.p, self.dim, cur, basis)

    def complement(self) -> "PadicSubspace":
        """Annihilator under the standard pairing (rows [-X^T | I] in pivot coordinates)."""
        n, p, mod = self.dim, self.p, self.p**self.prec
        free = [j for j in range(n) if j not in self.pivots]
        rows = []
        for f in free:
            v = [0] * n
            v[f] = 1
            for c, r in zip(self.pivots, self.rows):
                v[c] = (-r[f]) % mod
            rows.append(v)
        return PadicSubspace._build(p, n, self.prec, rows)

    def meet(self, other: "PadicSubspace", rank: int | None = None) -> "PadicSubspace":
        comp_rank = None if rank is None else self.dim - rank
        return self.complement().plus(other.complement(), comp_rank).complement()

    def is_invariant(self, A: Matrix) -> bool:
        t = max([0] + [-valuation(x, self.p) for r in A for x in r if x != 0])
        for r in self.rows:
            img = [sum((a * x for a, x in zip(row, r)), Fraction(0)) for row in A]
            if not self.contains([x * Fraction(self.p) ** t for x in img], self.prec):
                return False
        return True

    def describe(self) -> list[list[int]]:
        return [list(r) for r in self.rows]
