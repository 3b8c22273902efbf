"""Exact p-adic helpers on rationals, plus polynomial arithmetic modulo p^N."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

INF = math.inf

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def vp_int(n: int, p: int) -> int:
    if n == 0:
        return INF  # type: ignore[return-value]
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(a, p: int):
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    a = Fraction(a)
    if a == 0:
        return INF
    return vp_int(a.numerator, p) - vp_int(a.denominator, p)


def unit_part(a: Fraction, p: int) -> Fraction:
    return Fraction(a) / Fraction(p) ** valuation(a, p)


def to_residue(a, p: int, N: int) -> int:
    """Image of a p-integral rational in Z/p^N."""
    a = Fraction(a)
    if valuation(a, p) < 0:
        raise ValueError(f"{a} is not p-integral for p={p}")
    mod = p**N
    return a.numerator * pow(a.denominator, -1, mod) % mod


def canonical_residue(a, k: int, p: int) -> Fraction:
    """Canonical representative of ``a`` in Q_p / p^k Z_p, as an element of Z[1/p].

    Two rationals get the same representative exactly when their difference lies
    in p^k Z_(p).
    """
    a = Fraction(a)
    v = valuation(a, p)
    if v >= k:
        return Fraction(0)
    e = max(0, -v)
    scaled = a * p**e
    mod = p ** (k + e)
    return Fraction(to_residue(scaled, p, k + e) % mod, p**e)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))


def diag(entries: Sequence) -> Matrix:
    n = len(entries)
    return tuple(
        tuple(Fraction(entries[i]) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def matmul(A: Matrix, B: Matrix) -> Matrix:
    cols = list(zip(*B))
    return tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in A)


def matvec(A: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * x for a, x in zip(r, v)), Fraction(0)) for r in A)


def transpose(A: Matrix) -> Matrix:
    return tuple(zip(*A)) if A else ()


def matpow(A: Matrix, k: int) -> Matrix:
    R = identity(len(A))
    B = A
    while k:
        if k & 1:
            R = matmul(R, B)
        B = matmul(B, B)
        k >>= 1
    return R


def inverse(A: Matrix) -> Matrix:
    """Exact inverse over Q by Gauss-Jordan; raises ZeroDivisionError if singular."""
    n = len(A)
    M = [list(map(Fraction, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rational_row_basis(rows))


def rational_row_basis(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Reduced row echelon basis over Q of the span of ``rows``."""
    M = [list(map(Fraction, r)) for r in rows]
    if not M:
        return []
    n = len(M[0])
    out: list[list[Fraction]] = []
    r0 = 0
    for c in range(n):
        piv = next((r for r in range(r0, len(M)) if M[r][c] != 0), None)
        if piv is None:
            continue
        M[r0], M[piv] = M[piv], M[r0]
        inv = 1 / M[r0][c]
        M[r0] = [x * inv for x in M[r0]]
        for r in range(len(M)):
            if r != r0 and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[r0])]
        r0 += 1
    out = [r for r in M[:r0]]
    return out


def rational_kernel(A: Matrix) -> list[list[Fraction]]:
    """Basis of {x : A x = 0} over Q."""
    if not A:
        return []
    n = len(A[0])
    R = rational_row_basis(A)
    pivots = []
    for r in R:
        pivots.append(next(i for i, x in enumerate(r) if x != 0))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, pc in zip(R, pivots):
            v[pc] = -r[f]
        basis.append(v)
    return basis


def det(A: Matrix) -> Fraction:
    n = len(A)
    M = [list(map(Fraction, r)) for r in A]
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        d *= M[c][c]
        for r in range(c + 1, n):
            if M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return d


# -- polynomials over Z/p^N, coefficient lists low -> high ------------------


def ptrim(f: list[int]) -> list[int]:
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    return f


def padd(f: list[int], g: list[int], mod: int) -> list[int]:
    n = max(len(f), len(g))
    return ptrim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % mod for i in range(n)])


def psub(f: list[int], g: list[int], mod: int) -> list[int]:
    n = max(len(f), len(g))
    return ptrim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % mod for i in range(n)])


def pmul(f: list[int], g: list[int], mod: int) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % mod
    return ptrim(out)


def pdivmod_monic(f: list[int], g: list[int], mod: int) -> tuple[list[int], list[int]]:
    """Division with remainder by a monic ``g`` over Z/mod."""
    f = [x % mod for x in f]
    dg = len(g) - 1
    if g[-1] % mod != 1:
        raise ValueError("divisor must be monic")
    if len(f) - 1 < dg:
        return [0], ptrim(f)
    q = [0] * (len(f) - dg)
    r = list(f)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i] % mod
        if c:
            q[i - dg] = c
            for j, b in enumerate(g):
                r[i - dg + j] = (r[i - dg + j] - c * b) % mod
    return ptrim(q), ptrim(r[:dg] if dg else [0])


def pdeg(f: list[int]) -> int:
    f = ptrim(f)
    return -1 if f == [0] else len(f) - 1


def pegcd_field(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int], list[int]]:
    """Extended gcd over F_p: returns (d, s, t) with s*f + t*g = d, d monic."""
    r0, r1 = ptrim([x % p for x in f]), ptrim([x % p for x in g])
    s0, s1 = [1], [0]
    t0, t1 = [0], [1]
    while pdeg(r1) >= 0:
        inv = pow(r1[-1], -1, p)
        r1m = [(x * inv) % p for x in r1]
        q, r = pdivmod_monic(r0, r1m, p)
        q = [(x * inv) % p for x in q]
        r0, r1 = r1, r
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [(x * inv) % p for x in r0], [(x * inv) % p for x in s0], [(x * inv) % p for x in t0]


def hensel_lift(f: list[int], g: list[int], h: list[int], p: int, N: int) -> tuple[list[int], list[int]]:
    """Lift f = g*h (mod p), h monic and coprime to g mod p, to a factorization mod p^N.

    Quadratic Hensel step with Bezout cofactors; returns (g*, h*) with h* monic,
    deg h* = deg h and f == g* h* mod p^N.
    """
    d, s, t = pegcd_field(g, h, p)
    if d != [1]:
        raise ValueError("factors are not coprime modulo p")
    m = p
    while m < p**N:
        m2 = min(m * m, p**N)
        e = psub(f, pmul(g, h, m2), m2)
        q, r = pdivmod_monic(pmul(s, e, m2), h, m2)
        g_new = padd(padd(g, pmul(t, e, m2), m2), pmul(q, g, m2), m2)
        h_new = padd(h, r, m2)
        b = psub(padd(pmul(s, g_new, m2), pmul(t, h_new, m2), m2), [1], m2)
        c, dd = pdivmod_monic(pmul(s, b, m2), h_new, m2)
        s = psub(s, dd, m2)
        t = psub(psub(t, pmul(t, b, m2), m2), pmul(c, g_new, m2), m2)
        g, h, m = g_new, h_new, m2
    return g, h


def rational_reconstruct(a: int, m: int) -> Fraction | None:
    """Wang's rational reconstruction: r/s ≡ a (mod m) with |r|, s ≤ sqrt(m/2)."""
    bound = math.isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound or math.gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)
