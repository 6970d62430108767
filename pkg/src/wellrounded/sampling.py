"""Seeded random generators for exact test inputs."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import Matrix, SymmetricForm, det

DEFAULT_SEED = 20080101


def positive_rational(rng: random.Random, max_term: int = 20) -> Fraction:
    return Fraction(rng.randint(1, max_term), rng.randint(1, max_term))


def unimodular(n: int, rng: random.Random, moves: int | None = None) -> Matrix:
    """Random element of GL_n(Z) as a product of elementary matrices."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(moves if moves is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice([-2, -1, 1, 2])
        for row in u:
            row[j] += c * row[i]
        if rng.random() < 0.2:
            for row in u:
                row[i] = -row[i]
        if rng.random() < 0.2:
            for row in u:
                row[i], row[j] = row[j], row[i]
    return Matrix(u)


def integer_basis(n: int, rng: random.Random, spread: int = 3) -> Matrix:
    while True:
        b = Matrix([[rng.randint(-spread, spread) for _ in range(n)] for _ in range(n)])
        if det(b) != 0:
            return b


def pd_form(n: int, rng: random.Random, spread: int = 3, max_term: int = 5) -> SymmetricForm:
    """Random PD rational form ``ᵗB·diag(d)·B`` with B integral and d > 0."""
    b = integer_basis(n, rng, spread)
    d = Matrix.diag([positive_rational(rng, max_term) for _ in range(n)])
    return SymmetricForm(b.T @ d @ b)


def unimodular_diagonal(n: int, rng: random.Random, max_term: int = 20) -> list[Fraction]:
    """Positive rational diagonal entries with product 1, not all equal to 1."""
    while True:
        entries = [positive_rational(rng, max_term) for _ in range(n - 1)]
        prod = Fraction(1)
        for a in entries:
            prod *= a
        entries.append(1 / prod)
        if any(a != 1 for a in entries):
            return entries


def unitriangular(n: int, rng: random.Random, spread: int = 10) -> Matrix:
    return Matrix(
        [[1 if i == j else (rng.randint(-spread, spread) if j > i else 0) for j in range(n)] for i in range(n)]
    )
