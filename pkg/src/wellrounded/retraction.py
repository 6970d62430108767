"""Ash's deformation flow towards the well-rounded retract, in exact arithmetic.

Along the flow the Gram form is kept up to a uniform scale: with ``M1`` the
part of ``Q`` living on the span of the minimal vectors and ``M2 = Q - M1``,
the flow at parameter ``t = exp(2 n lambda)`` is the form ``t*M1 + M2``
(rescaled by ``exp(2 k lambda)``). Uniform scaling changes neither the
minimal vectors nor the strata, so every step stays rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .enumeration import MinimalVectorData, ShortVectorQuery, enumerate_short, minimal_vectors
from .exact import Matrix, SymmetricForm, fast, format_rational, hnf, invert, psd_rank, slow, to_rational
from .strata import normalized_invariant

__all__ = [
    "AlreadyWellRounded",
    "OutOfRange",
    "FlowDecomposition",
    "FlowEvent",
    "RetractionStep",
    "RetractionTrace",
    "decompose",
    "event",
    "flow_step",
    "flow_at",
    "retract_to_X",
]

# safety net only: the candidate search provably stops long before this
_MAX_ROUNDS = 64


class AlreadyWellRounded(ValueError):
    """The form is already in X; there is no flow event."""


class OutOfRange(ValueError):
    """Flow parameter outside ``[1, r]``."""


def _quad(rows, v):
    """ᵗv·M·v for M given as rows (Fraction or mpq entries)."""
    total = 0
    for i, vi in enumerate(v):
        if vi:
            r = rows[i]
            total += vi * sum(r[j] * vj for j, vj in enumerate(v) if vj)
    return total


@dataclass(frozen=True)
class FlowDecomposition:
    form: SymmetricForm
    M1: Matrix
    M2: Matrix
    k: int
    minimal: MinimalVectorData
    span_basis: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.form.n

    def certify(self) -> None:
        """Check the exact invariants; raises ``AssertionError`` on failure."""
        assert self.M1 + self.M2 == self.form.matrix
        assert psd_rank(self.M1) == self.k
        assert psd_rank(self.M2) == self.n - self.k
        for v in self.minimal.vectors:
            assert _quad(self.M2.rows, v) == 0

    def at(self, t) -> SymmetricForm:
        t = to_rational(t)
        return SymmetricForm(t * self.M1 + self.M2)


def decompose(form: SymmetricForm) -> FlowDecomposition:
    """Split ``Q`` into its part on the span of the minimal vectors and the rest.

    With ``W`` an integer basis of that span, ``M1 = QW (ᵗWQW)⁻¹ ᵗWQ``.
    """
    mv = minimal_vectors(form)
    h = hnf(mv.vectors)
    n = form.n
    if h.rank == n:
        m1 = form.matrix
    else:
        W = h.matrix()
        QW = form.matrix @ W
        m1 = QW @ invert(W.T @ QW) @ QW.T
    m2 = form.matrix - m1
    return FlowDecomposition(form, m1, m2, h.rank, mv, h.columns)


@dataclass(frozen=True)
class FlowEvent:
    """The moment the flow reaches the next stratum.

    ``r`` is ``exp(2 n tau)``; ``joining_vectors`` are the vectors that
    become minimal exactly at ``r``.
    """

    r: Fraction
    joining_vectors: tuple[tuple[int, ...], ...]
    k_before: int
    new_k: int
    n: int

    def tau(self, dps: int = 30) -> mpmath.mpf:
        with mpmath.workdps(dps):
            return mpmath.log(mpmath.mpf(self.r.numerator) / self.r.denominator) / (2 * self.n)

    def tau_decimal(self, digits: int = 20) -> str:
        return mpmath.nstr(self.tau(digits + 10), digits)


def _event(d: FlowDecomposition) -> FlowEvent:
    if d.k == d.n:
        raise AlreadyWellRounded("form is already well rounded")
    s2 = d.minimal.systole_sq
    # A vector v joins at ratio r_v = q2/(s2 - p2) with p2 = ᵗvM1v, q2 = ᵗvM2v.
    # Any v with r_v <= trial satisfies p2 + q2/trial <= s2, i.e. it lies in
    # the s2-ball of the flow form at t = trial (scaled by 1/trial), which in
    # turn sits inside the ball ᵗvQv <= s2 (1 + trial).
    m2 = [[fast(x) for x in row] for row in d.M2.rows]
    s2_fast = fast(s2)
    trial = Fraction(4)
    for _ in range(_MAX_ROUNDS):
        best: Fraction | None = None
        argmin: list[tuple[int, ...]] = []
        for v, val in enumerate_short(ShortVectorQuery(d.at(trial), trial * s2)):
            q2 = _quad(m2, v)
            if q2 == 0:
                continue
            p2 = (fast(val) - q2) / fast(trial)
            if p2 >= s2_fast:
                continue
            rv = slow(q2 / (s2_fast - p2))
            if best is None or rv < best:
                best, argmin = rv, [v]
            elif rv == best:
                argmin.append(v)
        if best is not None and best <= trial:
            joining = tuple(sorted(argmin))
            new_k = hnf(list(d.minimal.vectors) + list(joining)).rank
            return FlowEvent(best, joining, d.k, new_k, d.n)
        trial = trial * trial if best is None else min(trial * trial, best)
    raise RuntimeError("flow event search did not terminate")


def event(form: SymmetricForm) -> FlowEvent:
    """Exact event ratio of the flow started at ``form``."""
    return _event(decompose(form))


def flow_step(form: SymmetricForm) -> tuple[SymmetricForm, FlowEvent]:
    """Flow up to the next event; returns the rescaled form ``r*M1 + M2``."""
    d = decompose(form)
    ev = _event(d)
    return d.at(ev.r), ev


def flow_at(form: SymmetricForm, t) -> SymmetricForm:
    """Rescaled form ``t*M1 + M2`` for ``1 <= t <= r``."""
    t = to_rational(t)
    d = decompose(form)
    ev = _event(d)
    if t < 1 or t > ev.r:
        raise OutOfRange(f"t = {format_rational(t)} outside [1, {format_rational(ev.r)}]")
    return d.at(t)


@dataclass(frozen=True)
class RetractionStep:
    before: SymmetricForm
    event: FlowEvent
    after: SymmetricForm

    def to_json(self) -> dict:
        return {
            "r": format_rational(self.event.r),
            "tau_decimal": self.event.tau_decimal(),
            "joining": [list(v) for v in self.event.joining_vectors],
            "k_before": self.event.k_before,
            "k_after": self.event.new_k,
            "gram_after": self.after.to_json(),
        }


@dataclass(frozen=True)
class RetractionTrace:
    initial: SymmetricForm
    steps: tuple[RetractionStep, ...]
    final: SymmetricForm

    @property
    def ratios(self) -> tuple[Fraction, ...]:
        return tuple(s.event.r for s in self.steps)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def retract_to_X(form: SymmetricForm) -> RetractionTrace:
    """Iterate flow steps until the form is well rounded (at most n - 1 steps)."""
    steps = []
    current = form
    for _ in range(form.n):
        d = decompose(current)
        if d.k == form.n:
            return RetractionTrace(form, tuple(steps), current)
        ev = _event(d)
        nxt = d.at(ev.r)
        steps.append(RetractionStep(current, ev, nxt))
        current = nxt
    raise RuntimeError("retraction exceeded n - 1 steps")


def invariant_factor(step: RetractionStep) -> Fraction:
    """Ratio of normalized systole invariants across a step."""
    before = normalized_invariant(minimal_vectors(step.before).systole_sq, step.before)
    after = normalized_invariant(minimal_vectors(step.after).systole_sq, step.after)
    return after / before
