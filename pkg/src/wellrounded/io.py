"""JSON lattice input and output."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .exact import Matrix, SymmetricForm, to_rational

__all__ = ["LatticeInput", "InputError", "parse_lattice", "load_lattice", "form_to_json", "form_from_json"]


class InputError(ValueError):
    """Malformed lattice description."""


@dataclass(frozen=True)
class LatticeInput:
    n: int
    form: SymmetricForm
    basis: Matrix | None = None
    label: str | None = None


def _matrix(rows: Any, n: int, what: str) -> Matrix:
    if not isinstance(rows, list) or len(rows) != n:
        raise InputError(f"{what} must be a list of {n} rows")
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{what} row {i} must have {n} entries")
        try:
            out.append([to_rational(x) for x in row])
        except (TypeError, ValueError) as exc:
            raise InputError(f"{what} row {i}: {exc}") from None
    return Matrix(out)


def parse_lattice(obj: Any) -> LatticeInput:
    """Validate a decoded ``{"n": .., "gram" | "basis": ..}`` object."""
    if not isinstance(obj, dict):
        raise InputError("top-level JSON value must be an object")
    n = obj.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError("'n' must be a positive integer")
    has_gram, has_basis = "gram" in obj, "basis" in obj
    if has_gram == has_basis:
        raise InputError("exactly one of 'gram' or 'basis' is required")
    label = obj.get("label")
    if label is not None and not isinstance(label, str):
        raise InputError("'label' must be a string")
    try:
        if has_basis:
            basis = _matrix(obj["basis"], n, "basis")
            form = SymmetricForm.from_basis(basis)
        else:
            basis = None
            form = SymmetricForm(_matrix(obj["gram"], n, "gram"))
    except InputError:
        raise
    except ValueError as exc:  # includes NotPositiveDefinite and asymmetry
        raise InputError(str(exc)) from None
    return LatticeInput(n, form, basis, label)


def load_lattice(text: str) -> LatticeInput:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    return parse_lattice(obj)


def form_to_json(form: SymmetricForm) -> dict:
    return {"n": form.n, "gram": form.to_json()}


def form_from_json(obj: Any) -> SymmetricForm:
    return parse_lattice(obj).form
