"""Machine checks of the lattice statements behind the X != Y counterexample.

The basis used throughout is the unscaled upper-triangular matrix ``A0(n)``:
identity on the leading (n-1)x(n-1) block and 1/2 in every entry of the last
column. Its determinant is 1/2; the unit-volume normalization only rescales
the Gram form, which affects none of the checked statements.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .enumeration import minimal_vectors
from .exact import Matrix, SymmetricForm, canonical, det, format_rational, to_rational
from .sampling import DEFAULT_SEED, positive_rational, unimodular_diagonal, unitriangular
from .strata import classify

__all__ = [
    "DimensionTooSmall",
    "NotUnitriangular",
    "NotUnimodularDiagonal",
    "CounterexampleSpec",
    "VerificationReport",
    "counterexample",
    "verify_lemma_diag",
    "verify_lemma_nil",
    "verify_counterexample",
    "verify_ha_dichotomy",
    "run_suite",
]


class DimensionTooSmall(ValueError):
    pass


class NotUnitriangular(ValueError):
    pass


class NotUnimodularDiagonal(ValueError):
    pass


def _vecs(vectors) -> list[list[int]]:
    return [list(v) for v in vectors]


@dataclass(frozen=True)
class CounterexampleSpec:
    n: int
    basis: Matrix
    volume_note: str = "scalar 2^(-1/n) omitted; det(basis) = 1/2"

    @property
    def gram(self) -> SymmetricForm:
        return SymmetricForm.from_basis(self.basis)


@dataclass
class VerificationReport:
    claim: str
    passed: bool
    witness: dict[str, Any] = field(default_factory=dict)
    params: dict[str, Any] = field(default_factory=dict)
    expected_pass: bool = True
    skipped: bool = False

    @property
    def as_expected(self) -> bool:
        return self.skipped or self.passed == self.expected_pass

    def to_json(self) -> dict:
        status = "pass" if self.passed else "FAIL"
        if self.skipped:
            status = "skipped"
        elif not self.expected_pass:
            status += "-expected" if not self.passed else "-unexpected"
        return {
            "claim": self.claim,
            "status": status,
            "pass": self.passed,
            "expected_pass": self.expected_pass,
            "params": self.params,
            "witness": self.witness,
        }


def counterexample(n: int) -> CounterexampleSpec:
    """The basis A0(n) without its unit-volume scalar."""
    if n < 2:
        raise DimensionTooSmall(f"n must be at least 2, got {n}")
    half = Fraction(1, 2)
    rows = [[Fraction(int(i == j)) for j in range(n - 1)] + [half] for i in range(n - 1)]
    rows.append([Fraction(0)] * (n - 1) + [half])
    return CounterexampleSpec(n, Matrix(rows))


def expected_counterexample_vectors(n: int) -> list[tuple[int, ...]]:
    """e_1, ..., e_{n-1} and 2e_n - (e_1 + ... + e_{n-1}), canonical signs."""
    vecs = [tuple(int(i == j) for j in range(n)) for i in range(n - 1)]
    vecs.append(canonical([-1] * (n - 1) + [2]))
    return sorted(vecs)


def verify_lemma_diag(entries: Sequence) -> VerificationReport:
    """The systole of diag(a_1, ..., a_n) is min a_i.

    When the product of the entries is 1, additionally checks that
    min a_i <= 1 with equality exactly for the identity.
    """
    a = [to_rational(x) for x in entries]
    if any(x <= 0 for x in a):
        raise ValueError("diagonal entries must be positive")
    form = SymmetricForm.diag([x * x for x in a])
    mv = minimal_vectors(form)
    m = min(a)
    ok = mv.systole_sq == m * m
    witness: dict[str, Any] = {
        "systole_sq": format_rational(mv.systole_sq),
        "min_entry_sq": format_rational(m * m),
    }
    prod = Fraction(1)
    for x in a:
        prod *= x
    if prod == 1:
        is_id = all(x == 1 for x in a)
        ok = ok and m <= 1 and ((m == 1) == is_id)
        witness["unimodular"] = True
        witness["identity"] = is_id
    return VerificationReport("lemma-diag", ok, witness, {"entries": [format_rational(x) for x in a]})


def verify_lemma_nil(basis: Matrix | Sequence) -> VerificationReport:
    """An upper unitriangular basis has systole 1, attained by e_1."""
    b = basis if isinstance(basis, Matrix) else Matrix(basis)
    if not b.is_square() or not b.is_upper_triangular() or any(b[i, i] != 1 for i in range(b.nrows)):
        raise NotUnitriangular("basis must be upper triangular with unit diagonal")
    mv = minimal_vectors(SymmetricForm.from_basis(b))
    e1 = tuple(int(j == 0) for j in range(b.nrows))
    ok = mv.systole_sq == 1 and e1 in mv.vectors
    return VerificationReport(
        "lemma-nil",
        ok,
        {"systole_sq": format_rational(mv.systole_sq), "vectors": _vecs(mv.vectors)},
        {"n": b.nrows, "basis": b.to_json()},
    )


def verify_counterexample(n: int) -> VerificationReport:
    """A0(n) is well rounded but its minimal vectors span an index-2 subgroup.

    Only claimed for n >= 5. Smaller n (down to 2) still produce a report, with
    ``expected_pass`` False; its witness lists the extra minimal vectors.
    """
    if n < 2:
        raise DimensionTooSmall(f"n must be at least 2, got {n}")
    spec = counterexample(n)
    report = classify(spec.gram)
    found = sorted(report.minimal.vectors)
    expected = expected_counterexample_vectors(n)
    ok = found == expected and report.k == n and report.index_in_Zn == 2 and report.in_X and not report.in_Y
    witness: dict[str, Any] = {
        "systole_sq": format_rational(report.systole_sq),
        "vectors": _vecs(found),
        "signed_count": 2 * len(found),
        "k": report.k,
        "index": "infinite" if report.index_in_Zn is None else str(report.index_in_Zn),
        "in_X": report.in_X,
        "in_Y": report.in_Y,
        "det_basis": format_rational(det(spec.basis)),
    }
    if found != expected:
        witness["extra_vectors"] = _vecs(v for v in found if v not in expected)
        witness["missing_vectors"] = _vecs(v for v in expected if v not in found)
    return VerificationReport("counterexample", ok, witness, {"n": n}, expected_pass=n >= 5)


def verify_ha_dichotomy(n: int, h: Sequence) -> VerificationReport:
    """For H positive diagonal with det 1: H·A0(n) is well rounded iff H = Id.

    Also checks systole_sq <= (min a_i)^2, which holds because e_1..e_{n-1}
    and 2e_n - sum e_i have lengths a_1, ..., a_n under H·A0(n).
    """
    if n < 5:
        raise DimensionTooSmall(f"the dichotomy needs n >= 5, got {n}")
    a = [to_rational(x) for x in h]
    if len(a) != n:
        raise ValueError(f"expected {n} diagonal entries, got {len(a)}")
    prod = Fraction(1)
    for x in a:
        prod *= x
    if any(x <= 0 for x in a) or prod != 1:
        raise NotUnimodularDiagonal("H must be a positive diagonal with product 1")
    basis = Matrix.diag(a) @ counterexample(n).basis
    report = classify(SymmetricForm.from_basis(basis))
    is_id = all(x == 1 for x in a)
    m = min(a)
    bound_ok = report.systole_sq <= m * m
    ok = (report.in_X == is_id) and bound_ok
    witness = {
        "in_X": report.in_X,
        "k": report.k,
        "systole_sq": format_rational(report.systole_sq),
        "min_entry_sq": format_rational(m * m),
        "vectors": _vecs(report.minimal.vectors),
    }
    return VerificationReport("ha-dichotomy", ok, witness, {"n": n, "H": [format_rational(x) for x in a]})


def _aggregate(claim: str, reports: list[VerificationReport], params: dict) -> VerificationReport:
    failures = [r for r in reports if not r.passed]
    witness: dict[str, Any] = {"checked": len(reports), "failed": len(failures)}
    if failures:
        witness["first_failure"] = failures[0].to_json()
    return VerificationReport(claim, not failures, witness, params)


def run_suite(ns: Sequence[int] = (5, 6, 7, 8), seed: int = DEFAULT_SEED, samples: int = 20) -> list[VerificationReport]:
    """Run all four checks for each n; sampled checks use ``samples`` draws."""
    out: list[VerificationReport] = []
    for n in ns:
        if n < 2:
            raise DimensionTooSmall(f"n must be at least 2, got {n}")
        rng = random.Random(f"{seed}:{n}")
        out.append(verify_counterexample(n))

        diag_reports = [verify_lemma_diag([1] * n)]
        diag_reports += [verify_lemma_diag([positive_rational(rng) for _ in range(n)]) for _ in range(samples)]
        out.append(_aggregate("lemma-diag", diag_reports, {"n": n, "samples": len(diag_reports), "seed": seed}))

        nil_reports = [verify_lemma_nil(Matrix.identity(n))]
        nil_reports += [verify_lemma_nil(unitriangular(n, rng)) for _ in range(samples)]
        out.append(_aggregate("lemma-nil", nil_reports, {"n": n, "samples": len(nil_reports), "seed": seed}))

        if n >= 5:
            ha = [verify_ha_dichotomy(n, [1] * n)]
            ha += [verify_ha_dichotomy(n, unimodular_diagonal(n, rng)) for _ in range(samples)]
            out.append(_aggregate("ha-dichotomy", ha, {"n": n, "samples": len(ha), "seed": seed}))
        else:
            out.append(VerificationReport("ha-dichotomy", False, {"reason": "claim requires n >= 5"}, {"n": n}, skipped=True))
    return out
