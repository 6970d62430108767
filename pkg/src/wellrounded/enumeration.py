"""Exact short-vector enumeration (Fincke-Pohst) on rational Gram forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor

import gmpy2

from .exact import Matrix, SymmetricForm, canonical, fast, ldlt, slow, to_rational

__all__ = [
    "ShortVectorQuery",
    "MinimalVectorData",
    "enumerate_short",
    "minimal_vectors",
    "lll_reduce_gram",
]


@dataclass(frozen=True)
class ShortVectorQuery:
    form: SymmetricForm
    bound_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "bound_sq", to_rational(self.bound_sq))
        if self.bound_sq <= 0:
            raise ValueError("bound_sq must be positive")


@dataclass(frozen=True)
class MinimalVectorData:
    """Squared systole and the minimal vectors, one per sign pair."""

    systole_sq: Fraction
    vectors: tuple[tuple[int, ...], ...]

    @property
    def count_with_signs(self) -> int:
        return 2 * len(self.vectors)

    def signed_vectors(self) -> list[tuple[int, ...]]:
        out = []
        for v in self.vectors:
            out.append(v)
            out.append(tuple(-x for x in v))
        return out


def _int_range(center, radius_sq) -> range:
    """Integers z with (z - center)^2 <= radius_sq, computed exactly."""
    if radius_sq < 0:
        return range(0)
    p, q = radius_sq.numerator, radius_sq.denominator
    s = gmpy2.isqrt(p * q) // q  # floor(sqrt(radius_sq))
    # hi = floor(center + sqrt), lo = ceil(center - sqrt); an empty range
    # comes out as lo > hi
    hi = floor(center) + s + 1
    while hi > center and (hi - center) ** 2 > radius_sq:
        hi -= 1
    lo = ceil(center) - s - 1
    while lo < center and (lo - center) ** 2 > radius_sq:
        lo += 1
    return range(int(lo), int(hi) + 1)


def _traverse(form: SymmetricForm, bound: Fraction, shrink: bool) -> list:
    """Depth-first walk over all v with ᵗvQv <= bound.

    With ``shrink`` the bound is lowered to the best nonzero value seen so far,
    so only vectors attaining the minimum survive. Returns raw signed vectors
    paired with their values as ``mpq``.
    """
    L, D = ldlt(form)
    n = form.n
    # Lcols[i][j] = L[j][i]: coefficient of v_j in the i-th coordinate
    Lcols = [[fast(L[j, i]) for j in range(n)] for i in range(n)]
    D = [fast(d) for d in D]
    zero = gmpy2.mpq(0)
    v = [0] * n
    found: list = []
    best = [fast(bound)]

    def walk(i: int, acc) -> None:
        if i < 0:
            if acc == 0:
                return
            if shrink and acc < best[0]:
                best[0] = acc
                found.clear()
            found.append((tuple(v), acc))
            return
        col = Lcols[i]
        center = zero
        for j in range(i + 1, n):
            if v[j]:
                center -= col[j] * v[j]
        di = D[i]
        for z in _int_range(center, (best[0] - acc) / di):
            # bound may have shrunk during earlier siblings
            t = di * (z - center) ** 2
            if acc + t > best[0]:
                continue
            v[i] = z
            walk(i - 1, acc + t)
        v[i] = 0

    walk(n - 1, zero)
    if shrink:
        found = [(w, val) for w, val in found if val == best[0]]
    return found


def _finalize(raw, transform: Matrix | None) -> list[tuple[tuple[int, ...], Fraction]]:
    seen = {}
    for w, val in raw:
        if transform is not None:
            w = tuple(int(x) for x in transform.apply(w))
        seen[canonical(w)] = val
    ordered = sorted(seen.items(), key=lambda item: (item[1], item[0]))
    return [(w, slow(val)) for w, val in ordered]


def enumerate_short(query: ShortVectorQuery, *, reduce: bool = False) -> list[tuple[tuple[int, ...], Fraction]]:
    """All nonzero integer vectors with form value at most ``bound_sq``.

    One representative per ``±v`` pair (first nonzero coordinate positive),
    sorted by value and then lexicographically. With ``reduce=True`` the form
    is LLL-reduced first; the output is identical either way.
    """
    form = query.form
    transform = None
    if reduce:
        form, transform = lll_reduce_gram(form)
    raw = _traverse(form, query.bound_sq, shrink=False)
    return _finalize(raw, transform)


def minimal_vectors(form: SymmetricForm, *, reduce: bool = False) -> MinimalVectorData:
    """Exact squared systole and minimal vector set of ``form``."""
    work, transform = (lll_reduce_gram(form) if reduce else (form, None))
    bound = min(work[i, i] for i in range(work.n))
    raw = _traverse(work, bound, shrink=True)
    items = _finalize(raw, transform)
    systole_sq = items[0][1]
    return MinimalVectorData(systole_sq, tuple(v for v, _ in items))


def lll_reduce_gram(form: SymmetricForm, delta: Fraction = Fraction(3, 4)) -> tuple[SymmetricForm, Matrix]:
    """LLL reduction carried out on the Gram matrix in exact arithmetic.

    Returns the reduced form ``ᵗU·Q·U`` and the unimodular ``U``.
    """
    n = form.n
    G = [list(r) for r in form.matrix.rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def gso():
        L, D = ldlt(Matrix(G))
        return L, D

    def add_col(k: int, j: int, q: int) -> None:
        # b_k <- b_k - q b_j
        for i in range(n):
            U[i][k] -= q * U[i][j]
        for i in range(n):
            G[i][k] -= q * G[i][j]
        for i in range(n):
            G[k][i] -= q * G[j][i]

    def swap(a: int, b: int) -> None:
        for row in U:
            row[a], row[b] = row[b], row[a]
        G[a], G[b] = G[b], G[a]
        for row in G:
            row[a], row[b] = row[b], row[a]

    k = 1
    L, D = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            mu = L[k, j]
            q = floor(mu + Fraction(1, 2))
            if q:
                add_col(k, j, q)
                L, D = gso()
        if D[k] >= (delta - L[k, k - 1] ** 2) * D[k - 1]:
            k += 1
        else:
            swap(k, k - 1)
            L, D = gso()
            k = max(k - 1, 1)
    return SymmetricForm(G), Matrix(U)
