"""Exact rational linear algebra: RREF, rank, kernels, quotient bases.

Elimination is fraction-free on integer rows (each input row is first scaled
by the lcm of its denominators, which leaves the row space unchanged) and is
normalised to Fractions only at the end.  The pivot of each step is the first
nonzero entry scanning columns left to right, so results depend only on the
input matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import kernels

SPARSE_DENSITY = 0.10

SparseRow = Sequence[tuple[int, Fraction]]


class QMatrix:
    """Immutable exact rational matrix, stored dense or as sorted sparse rows."""

    __slots__ = ("rows", "cols", "_dense", "_sparse")

    def __init__(self, rows: int, cols: int, sparse_rows: Sequence[Mapping[int, object]] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        clean: list[tuple[tuple[int, Fraction], ...]] = []
        nnz = 0
        srcs = sparse_rows if sparse_rows is not None else [{}] * rows
        if len(srcs) != rows:
            raise ValueError("row count does not match storage")
        for src in srcs:
            items = []
            for c, v in sorted(src.items()):
                if not 0 <= c < cols:
                    raise IndexError(f"column {c} out of range")
                v = Fraction(v)
                if v:
                    items.append((c, v))
            nnz += len(items)
            clean.append(tuple(items))
        total = rows * cols
        if total and nnz / total >= SPARSE_DENSITY:
            self._dense = [[Fraction(0)] * cols for _ in range(rows)]
            for i, items in enumerate(clean):
                for c, v in items:
                    self._dense[i][c] = v
            self._sparse = None
        else:
            self._dense = None
            self._sparse = clean

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], cols: int | None = None) -> QMatrix:
        if cols is None:
            cols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            rows.append({j: v for j, v in enumerate(r) if v})
        return cls(len(data), cols, rows)

    @classmethod
    def from_triplets(cls, rows: int, cols: int, triplets: Iterable[tuple[int, int, object]]) -> QMatrix:
        acc: list[dict[int, Fraction]] = [{} for _ in range(rows)]
        for i, j, v in triplets:
            acc[i][j] = acc[i].get(j, 0) + Fraction(v)
        return cls(rows, cols, acc)

    @classmethod
    def identity(cls, n: int) -> QMatrix:
        return cls(n, n, [{i: 1} for i in range(n)])

    @property
    def is_sparse(self) -> bool:
        return self._sparse is not None

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row_items(self, i: int) -> tuple[tuple[int, Fraction], ...]:
        if self._sparse is not None:
            return self._sparse[i]
        return tuple((j, v) for j, v in enumerate(self._dense[i]) if v)

    def entry(self, i: int, j: int) -> Fraction:
        if self._dense is not None:
            return self._dense[i][j]
        for c, v in self._sparse[i]:
            if c == j:
                return v
        return Fraction(0)

    def nnz(self) -> int:
        return sum(len(self.row_items(i)) for i in range(self.rows))

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i in range(self.rows):
            for j, v in self.row_items(i):
                out[i][j] = v
        return out

    def transpose(self) -> QMatrix:
        acc: list[dict[int, Fraction]] = [{} for _ in range(self.cols)]
        for i in range(self.rows):
            for j, v in self.row_items(i):
                acc[j][i] = v
        return QMatrix(self.cols, self.rows, acc)

    def matvec(self, v: Sequence[object]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return [sum((x * v[j] for j, x in self.row_items(i)), Fraction(0)) for i in range(self.rows)]

    def matmul(self, other: QMatrix) -> QMatrix:
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        acc: list[dict[int, Fraction]] = []
        for i in range(self.rows):
            row: dict[int, Fraction] = {}
            for k, a in self.row_items(i):
                for j, b in other.row_items(k):
                    row[j] = row.get(j, 0) + a * b
            acc.append(row)
        return QMatrix(self.rows, other.cols, acc)

    def is_zero(self) -> bool:
        return all(not self.row_items(i) for i in range(self.rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and all(
            self.row_items(i) == other.row_items(i) for i in range(self.rows)
        )

    def __repr__(self) -> str:
        kind = "sparse" if self.is_sparse else "dense"
        return f"QMatrix({self.rows}x{self.cols}, {kind}, nnz={self.nnz()})"


@dataclass(frozen=True)
class RrefResult:
    reduced: QMatrix
    pivot_cols: tuple[int, ...]
    rank: int


def integer_row(items: Iterable[tuple[int, object]]) -> tuple[list[int], list[int]]:
    """Scale a sparse rational row to integers (same row space)."""
    items = [(c, Fraction(v)) for c, v in items if v]
    items.sort()
    if not items:
        return [], []
    den = lcm(*(v.denominator for _, v in items))
    return [c for c, _ in items], [v.numerator * (den // v.denominator) for _, v in items]


def _int_rows(m: QMatrix):
    return [integer_row(m.row_items(i)) for i in range(m.rows)]


class RowSpace:
    """Reduced echelon basis of the span of some sparse rows in Q^ncols.

    Supports membership/normal-form reduction: ``reduce(v)`` returns the
    unique representative of ``v`` modulo the span supported on non-pivot
    columns.
    """

    def __init__(self, int_rows, ncols: int, full: bool = True):
        self.ncols = ncols
        ech = kernels.echelon(int_rows, ncols)
        self.pivot_cols = tuple(r[0][0] for r in ech)
        self.rank = len(ech)
        self._full = full
        if full:
            rows = kernels.back_substitute(ech)
            self._rows = {
                cols[0]: {c: Fraction(v, vals[0]) for c, v in zip(cols, vals)} for cols, vals in rows
            }
        else:
            self._rows = None

    @classmethod
    def from_rational_rows(cls, rows: Iterable[SparseRow], ncols: int, full: bool = True) -> RowSpace:
        return cls([integer_row(r) for r in rows], ncols, full)

    def free_cols(self) -> tuple[int, ...]:
        piv = set(self.pivot_cols)
        return tuple(c for c in range(self.ncols) if c not in piv)

    def reduce(self, vec: Mapping[int, object]) -> dict[int, Fraction]:
        """Normal form of ``vec`` modulo the row space (support on free columns)."""
        if not self._full:
            raise ValueError("row space was built without back-substitution")
        out: dict[int, Fraction] = {c: Fraction(v) for c, v in vec.items() if v}
        for c in [c for c in out if c in self._rows]:
            a = out.get(c)
            if not a:
                continue
            for c2, v2 in self._rows[c].items():
                w = out.get(c2, 0) - a * v2
                if w:
                    out[c2] = w
                else:
                    out.pop(c2, None)
        return out

    def pivot_row(self, c: int) -> dict[int, Fraction]:
        return dict(self._rows[c])


def rref(m: QMatrix) -> RrefResult:
    space = RowSpace(_int_rows(m), m.cols)
    rows = [space.pivot_row(c) for c in space.pivot_cols]
    rows += [{}] * (m.rows - len(rows))
    return RrefResult(QMatrix(m.rows, m.cols, rows), space.pivot_cols, space.rank)


def rank(m: QMatrix) -> int:
    return len(kernels.echelon(_int_rows(m), m.cols))


def kernel_basis(m: QMatrix) -> list[list[Fraction]]:
    """Basis of {v : m v = 0}; one vector per free column, that entry set to 1."""
    space = RowSpace(_int_rows(m), m.cols)
    basis = []
    for f in space.free_cols():
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for c in space.pivot_cols:
            coef = space._rows[c].get(f)
            if coef:
                v[c] = -coef
        basis.append(v)
    return basis


def cokernel_cols(m: QMatrix) -> tuple[int, ...]:
    """Coordinates labelling a basis of Q^cols / rowspan(m): the non-pivot columns."""
    return RowSpace(_int_rows(m), m.cols, full=False).free_cols()


def rank_mod_p(m: QMatrix, p: int) -> int:
    """Rank of the integer-scaled rows of ``m`` modulo the prime ``p``."""
    return kernels.rank_mod_p(_int_rows(m), m.cols, p)
