"""Sparse operator matrices over labeled bases."""

from __future__ import annotations

from dataclasses import dataclass

from .scalars import Scalar


@dataclass
class OperatorMatrix:
    """Sparse (row label, col label) -> Scalar map over explicit label lists."""

    rows: tuple
    cols: tuple
    entries: dict

    def __init__(self, rows, cols, entries=None):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        rset, cset = set(self.rows), set(self.cols)
        clean = {}
        for (r, c), v in (entries or {}).items():
            v = Scalar.coerce(v)
            if v.is_zero():
                continue
            if r not in rset or c not in cset:
                raise KeyError(f"entry label ({r!r}, {c!r}) outside declared basis")
            clean[(r, c)] = v
        self.entries = clean

    # --- constructors ----------------------------------------------------------

    @classmethod
    def identity(cls, labels) -> "OperatorMatrix":
        labels = tuple(labels)
        return cls(labels, labels, {(l, l): Scalar.rational(1) for l in labels})

    @classmethod
    def zero(cls, rows, cols=None) -> "OperatorMatrix":
        rows = tuple(rows)
        return cls(rows, tuple(cols) if cols is not None else rows, {})

    # --- access ------------------------------------------------------------------

    def entry(self, r, c) -> Scalar:
        return self.entries.get((r, c), Scalar.rational(0))

    def column(self, c) -> dict:
        return {r: v for (r, cc), v in self.entries.items() if cc == c}

    def is_zero(self) -> bool:
        return not self.entries

    # --- arithmetic ---------------------------------------------------------------

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("basis mismatch in matrix sum")
        out = dict(self.entries)
        for key, v in other.entries.items():
            out[key] = out.get(key, Scalar.rational(0)) + v
        return OperatorMatrix(self.rows, self.cols, out)

    def __neg__(self) -> "OperatorMatrix":
        return OperatorMatrix(
            self.rows, self.cols, {k: -v for k, v in self.entries.items()}
        )

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return self + (-other)

    def scale(self, c) -> "OperatorMatrix":
        c = Scalar.coerce(c)
        return OperatorMatrix(
            self.rows, self.cols, {k: v * c for k, v in self.entries.items()}
        )

    def __mul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        if self.cols != other.rows:
            raise ValueError("basis mismatch in matrix product")
        by_row: dict = {}
        for (k, c), v in other.entries.items():
            by_row.setdefault(k, []).append((c, v))
        out: dict = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):  # noqa: B020
                key = (r, c)
                out[key] = out.get(key, Scalar.rational(0)) + v * w
        return OperatorMatrix(self.rows, other.cols, out)

    def adjoint(self) -> "OperatorMatrix":
        return OperatorMatrix(
            self.cols,
            self.rows,
            {(c, r): v.conjugate() for (r, c), v in self.entries.items()},
        )

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for (r, c), v in self.entries.items():
            if c in vec:
                out[r] = out.get(r, Scalar.rational(0)) + v * vec[c]
        return {r: v for r, v in out.items() if not v.is_zero()}

    def trace(self) -> Scalar:
        total = Scalar.rational(0)
        for (r, c), v in self.entries.items():
            if r == c:
                total = total + v
        return total

    def restrict(self, rows, cols) -> "OperatorMatrix":
        rows, cols = tuple(rows), tuple(cols)
        rset, cset = set(rows), set(cols)
        return OperatorMatrix(
            rows,
            cols,
            {k: v for k, v in self.entries.items() if k[0] in rset and k[1] in cset},
        )

    def restrict_columns(self, cols) -> "OperatorMatrix":
        return self.restrict(self.rows, cols)

    # --- norms and export -----------------------------------------------------------

    def max_abs(self) -> float:
        return max((abs(complex(v)) for v in self.entries.values()), default=0.0)

    def frobenius(self) -> float:
        return sum(abs(complex(v)) ** 2 for v in self.entries.values()) ** 0.5

    def to_numpy(self, row_order=None, col_order=None):
        import numpy as np

        row_order = list(row_order) if row_order is not None else list(self.rows)
        col_order = list(col_order) if col_order is not None else list(self.cols)
        ri = {r: i for i, r in enumerate(row_order)}
        ci = {c: i for i, c in enumerate(col_order)}
        out = np.zeros((len(row_order), len(col_order)), dtype=complex)
        for (r, c), v in self.entries.items():
            if r in ri and c in ci:
                out[ri[r], ci[c]] = complex(v)
        return out

    @classmethod
    def from_numpy(cls, arr, rows, cols, tol: float = 0.0) -> "OperatorMatrix":
        rows, cols = tuple(rows), tuple(cols)
        entries = {}
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                z = complex(arr[i, j])
                if abs(z) > tol:
                    entries[(r, c)] = Scalar.from_float(z)
        return cls(rows, cols, entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorMatrix):
            return NotImplemented
        if self.rows != other.rows or self.cols != other.cols:
            return False
        keys = set(self.entries) | set(other.entries)
        return all(self.entry(*k) == other.entry(*k) for k in keys)

    def __repr__(self) -> str:
        return (
            f"OperatorMatrix({len(self.rows)}x{len(self.cols)}, "
            f"{len(self.entries)} entries)"
        )


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    return a * b - b * a
