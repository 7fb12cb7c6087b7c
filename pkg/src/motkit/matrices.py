"""Small dense matrices over the rationals, exact throughout."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class SingularMatrixError(ArithmeticError):
    pass


class Matrix:
    """Immutable rectangular matrix of Fractions."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[Fraction | int]]):
        normalized = tuple(tuple(Fraction(x) for x in row) for row in rows)
        if normalized:
            width = len(normalized[0])
            if any(len(row) != width for row in normalized):
                raise ValueError("rows have unequal lengths")
        self._rows = normalized

    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(nrows: int, ncols: int) -> "Matrix":
        return Matrix([[0] * ncols for _ in range(nrows)])

    @staticmethod
    def block_diag(blocks: Sequence["Matrix"]) -> "Matrix":
        # zero-size blocks are legal and contribute nothing
        total_r = sum(b.nrows for b in blocks)
        total_c = sum(b.ncols for b in blocks)
        rows = [[Fraction(0)] * total_c for _ in range(total_r)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.nrows):
                for j in range(b.ncols):
                    rows[r0 + i][c0 + j] = b.entry(i, j)
            r0 += b.nrows
            c0 += b.ncols
        return Matrix(rows)

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return len(self._rows[0]) if self._rows else 0

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def entry(self, i: int, j: int) -> Fraction:
        return self._rows[i][j]

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self._rows)) if self._rows else Matrix([])

    def is_symmetric(self) -> bool:
        return self.is_square and self == self.transpose()

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        return Matrix([[a + b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._rows, other._rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._require_same_shape(other)
        return Matrix([[a - b for a, b in zip(ra, rb)]
                       for ra, rb in zip(self._rows, other._rows)])

    def __neg__(self) -> "Matrix":
        return self.scaled(-1)

    def scaled(self, factor: Fraction | int) -> "Matrix":
        factor = Fraction(factor)
        return Matrix([[factor * x for x in row] for row in self._rows])

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch: {self.shape} * {other.shape}")
            cols = other.transpose()._rows
            return Matrix([[sum(a * b for a, b in zip(row, col)) for col in cols]
                           for row in self._rows])
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        return NotImplemented

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def _require_same_shape(self, other: "Matrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def det(self) -> Fraction:
        if not self.is_square:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        work = [list(row) for row in self._rows]
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                work[col], work[pivot] = work[pivot], work[col]
                det = -det
            det *= work[col][col]
            inv = 1 / work[col][col]
            for r in range(col + 1, n):
                factor = work[r][col] * inv
                if factor:
                    work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
        return det

    def inverse(self) -> "Matrix":
        if not self.is_square:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        work = [list(row) + [Fraction(int(i == j)) for j in range(n)]
                for i, row in enumerate(self._rows)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r][col]), None)
            if pivot is None:
                raise SingularMatrixError("matrix is singular")
            work[col], work[pivot] = work[pivot], work[col]
            inv = 1 / work[col][col]
            work[col] = [x * inv for x in work[col]]
            for r in range(n):
                if r != col and work[r][col]:
                    factor = work[r][col]
                    work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
        return Matrix([row[n:] for row in work])

    def __str__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"[{body}]"

    def __repr__(self) -> str:
        return f"Matrix({self})"
