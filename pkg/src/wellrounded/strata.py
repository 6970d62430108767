"""Well-rounded strata X_k, X, Y and the exhaustion function F."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .enumeration import MinimalVectorData, ShortVectorQuery, enumerate_short, minimal_vectors
from .exact import SymmetricForm, format_rational, hnf

__all__ = ["StratumReport", "ExhaustionValue", "classify", "exhaustion_value", "exhaustion_partial"]


@dataclass(frozen=True)
class StratumReport:
    k: int
    n: int
    index_in_Zn: int | None  # None when k < n (infinite index)
    systole_sq: Fraction
    normalized_systole_invariant: Fraction
    minimal: MinimalVectorData

    @property
    def in_X(self) -> bool:
        return self.k == self.n

    @property
    def in_Y(self) -> bool:
        return self.index_in_Zn == 1

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "in_X": self.in_X,
            "in_Y": self.in_Y,
            "index": "infinite" if self.index_in_Zn is None else str(self.index_in_Zn),
            "systole_sq": format_rational(self.systole_sq),
            "normalized_invariant": format_rational(self.normalized_systole_invariant),
        }


def normalized_invariant(systole_sq: Fraction, form: SymmetricForm) -> Fraction:
    """``systole_sq**n / det(Q)``; invariant under uniform rescaling of Q."""
    return systole_sq ** form.n / form.det()


def classify(form: SymmetricForm) -> StratumReport:
    """Locate ``form`` in the stratification by rank of its minimal vectors."""
    mv = minimal_vectors(form)
    h = hnf(mv.vectors)
    return StratumReport(
        k=h.rank,
        n=form.n,
        index_in_Zn=h.index,
        systole_sq=mv.systole_sq,
        normalized_systole_invariant=normalized_invariant(mv.systole_sq, form),
        minimal=mv,
    )


@dataclass(frozen=True)
class ExhaustionValue:
    """Truncated value of F(A) = sum over v in Z^n of exp(-|Av|).

    This is the one non-exact quantity in the package: ``value`` and
    ``tail_bound`` are mpmath floats, and the true sum lies within
    ``tail_bound`` of ``value`` (up to the working precision).
    """

    value: mpmath.mpf
    tail_bound: mpmath.mpf
    truncation_radius_sq: Fraction

    def to_json(self, digits: int = 20) -> dict:
        return {
            "value": mpmath.nstr(self.value, digits),
            "tail_bound": mpmath.nstr(self.tail_bound, 5),
            "truncation_radius_sq": format_rational(self.truncation_radius_sq),
            "exact": False,
        }


def _sqrt(x: Fraction) -> mpmath.mpf:
    return mpmath.sqrt(mpmath.mpf(x.numerator) / x.denominator)


def _tail_bound(radius: int, systole: mpmath.mpf, n: int) -> mpmath.mpf:
    """Bound on the sum of exp(-|Av|) over |Av| > radius.

    Points with norm in (R + j, R + j + 1] number at most
    (2(R + j + 1)/syst + 1)^n and each contributes at most exp(-(R + j)).
    Once consecutive shell terms shrink by a ratio below 1, that ratio only
    decreases further, so the rest is dominated by a geometric series.
    """

    def term(j):
        return (2 * (radius + j + 1) / systole + 1) ** n * mpmath.exp(-(radius + j))

    total = mpmath.mpf(0)
    j = 0
    t = term(0)
    while True:
        t_next = term(j + 1)
        ratio = t_next / t
        if ratio < 1:
            return total + t / (1 - ratio)
        total += t
        t = t_next
        j += 1


def exhaustion_partial(form: SymmetricForm, radius: int, *, dps: int = 30) -> ExhaustionValue:
    """Sum F over lattice points of norm at most ``radius`` (an integer)."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    with mpmath.workdps(dps):
        systole = _sqrt(minimal_vectors(form).systole_sq)
        total = mpmath.mpf(1)
        if radius > 0:
            for _, val in enumerate_short(ShortVectorQuery(form, Fraction(radius * radius))):
                total += 2 * mpmath.exp(-_sqrt(val))
        tail = _tail_bound(radius, systole, form.n)
        return ExhaustionValue(+total, +tail, Fraction(radius * radius))


def exhaustion_value(form: SymmetricForm, tolerance: float, *, dps: int = 30) -> ExhaustionValue:
    """F(A) with a certified truncation error of at most ``tolerance``.

    The truncation radius is the smallest integer whose tail bound is within
    tolerance, so a smaller tolerance never yields a larger tail bound.
    """
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    with mpmath.workdps(dps):
        systole = _sqrt(minimal_vectors(form).systole_sq)
        tol = mpmath.mpf(tolerance)
        radius = 0
        while _tail_bound(radius, systole, form.n) > tol:
            radius += 1
    return exhaustion_partial(form, radius, dps=dps)
