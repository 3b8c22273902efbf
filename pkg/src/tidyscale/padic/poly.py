"""Characteristic polynomials, Newton polygons and slope factorization."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arith import INF, Matrix, hensel_lift, to_residue, valuation


def charpoly(A: Matrix) -> list[Fraction]:
    """Characteristic polynomial det(xI - A), coefficients low -> high.

    Berkowitz's algorithm: division free, so the only arithmetic is exact ring
    arithmetic on the rational entries.
    """
    n = len(A)
    if n == 0:
        return [Fraction(1)]
    # vector of coefficients high -> low, built up over leading principal minors
    C = [Fraction(1), -A[0][0]]
    for r in range(1, n):
        R = [A[r][j] for j in range(r)]  # row segment
        S = [A[i][r] for i in range(r)]  # column segment
        Asub = [list(A[i][:r]) for i in range(r)]
        a = A[r][r]
        # Toeplitz column: 1, -a, -R S, -R A S, -R A^2 S, ...
        col = [Fraction(1), -a]
        vec = S
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, vec)), Fraction(0)))
            vec = [sum((Asub[i][j] * vec[j] for j in range(r)), Fraction(0)) for i in range(r)]
        # multiply the (r+2) x (r+1) lower-triangular Toeplitz matrix by C
        newC = []
        for i in range(r + 2):
            s = Fraction(0)
            for j in range(r + 1):
                if 0 <= i - j < len(col):
                    s += col[i - j] * C[j]
            newC.append(s)
        C = newC
    return list(reversed(C))


def poly_str(coeffs: Sequence[Fraction], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            t = mono
        else:
            t = f"{abs(c)}{('*' + mono) if mono else ''}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, t))
    if not terms:
        return "0"
    first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    return first + "".join(f" {s} {t}" for s, t in terms[1:])


@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the points (i, v_p(a_i)).

    ``segments`` holds (slope, multiplicity) for the nonzero roots, in increasing
    slope order; the roots of the polynomial then have valuations ``-slope``.
    Zero roots are kept apart in ``zero_roots`` (an infinite slope).
    """

    p: int
    segments: tuple[tuple[Fraction, int], ...]
    zero_roots: int
    vertices: tuple[tuple[int, int], ...] = field(default=())

    def slope_multiset(self) -> list[tuple[Fraction | float, int]]:
        out: list[tuple[Fraction | float, int]] = list(self.segments)
        if self.zero_roots:
            out.append((INF, self.zero_roots))
        return out

    def root_valuations(self) -> list[Fraction | float]:
        vals: list[Fraction | float] = []
        for s, m in self.segments:
            vals.extend([-s] * m)
        vals.extend([INF] * self.zero_roots)
        return sorted(vals)

    def count(self, sign: int) -> int:
        """Number of roots with valuation of the given sign (+1, 0, -1); zero roots count as +1."""
        c = sum(m for s, m in self.segments if (s < 0 and sign > 0) or (s == 0 and sign == 0) or (s > 0 and sign < 0))
        return c + (self.zero_roots if sign > 0 else 0)

    def expansion_exponent(self) -> int:
        """Sum of -v over roots of negative valuation (always an integer)."""
        tot = sum(s * m for s, m in self.segments if s > 0)
        assert tot.denominator == 1
        return int(tot)


def newton_polygon(coeffs: Sequence, p: int) -> NewtonPolygon:
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has no Newton polygon")
    m = 0
    while coeffs[m] == 0:
        m += 1
    pts = [(i, valuation(c, p)) for i, c in enumerate(coeffs) if i >= m and c != 0]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segs = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        segs.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return NewtonPolygon(p, tuple(segs), m, tuple(hull))


def scale_from_polygon(poly: NewtonPolygon) -> int:
    return poly.p ** poly.expansion_exponent()


# -- slope factorization -----------------------------------------------------


def split_positive(coeffs: Sequence, p: int, N: int) -> tuple[list[int], list[int], int]:
    """Split off the roots of positive valuation.

    ``coeffs`` (low -> high, p-adic rationals, nonzero constant term) is divided
    by the coefficient at the first vertex of minimal valuation; the result
    factors mod p^N as ``pos * rest`` with ``pos`` monic whose roots all have
    positive valuation and ``rest`` whose roots have valuation <= 0.
    Returns (pos, rest, k) with k = deg pos.
    """
    coeffs = [Fraction(c) for c in coeffs]
    vals = [valuation(c, p) for c in coeffs]
    vmin = min(vals)
    k = vals.index(vmin)
    lead = coeffs[k]
    norm = [to_residue(c / lead, p, N) for c in coeffs]
    if k == 0:
        return [1], norm, 0
    h0 = [0] * k + [1]
    g0 = norm[k:]
    if len(g0) == 1:
        # every root has positive valuation
        return norm, [1], k
    g, h = hensel_lift(norm, g0, h0, p, N)
    return h, g, k


def reverse(f: Sequence[int]) -> list[int]:
    return list(reversed(list(f)))


def slope_factors(coeffs: Sequence, p: int, N: int) -> dict[str, list[int]]:
    """Factor a charpoly (low -> high) mod p^N by sign of root valuation.

    Returns integer coefficient lists (up to unit/p-power scalars, which do not
    affect kernels or images of the evaluated matrix polynomials):
    ``zero`` (x^m), ``pos`` (roots v>0, nonzero), ``unit`` (v=0), ``neg`` (v<0).
    """
    coeffs = [Fraction(c) for c in coeffs]
    m = 0
    while coeffs[m] == 0:
        m += 1
    f0 = coeffs[m:]
    pos, rest, _ = split_positive(f0, p, N)
    # roots of rest have valuation <= 0; reversing inverts them
    rpos, rrest, _ = split_positive(reverse(rest), p, N)
    return {
        "zero": [0] * m + [1],
        "pos": pos,
        "neg": reverse(rpos),
        "unit": reverse(rrest),
    }
