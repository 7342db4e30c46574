"""Exact rational scalars, dense matrices and fraction-free linear solving.

Rationals are :class:`fractions.Fraction`, which already keeps every value in
lowest terms with a positive denominator.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

from .errors import DuplicateNodes, SingularMatrix

Rational = Fraction
RationalLike = Union[int, Fraction, str]

__all__ = [
    "Rational",
    "Matrix",
    "as_rational",
    "format_rational",
    "parse_rational",
    "determinant",
    "solve_linear",
    "solve_system",
    "vandermonde_matrix",
    "lagrange_extrapolate_coeffs",
]


def as_rational(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(q: RationalLike) -> str:
    """Serialize as ``"num/den"``, dropping the denominator when it is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


@dataclass(frozen=True)
class Matrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, "
                f"got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), ncols, tuple(as_rational(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self[i, j] for i in range(self.rows))

    def transpose(self) -> "Matrix":
        return Matrix.from_rows([self.column(j) for j in range(self.cols)])

    def apply(self, x: Sequence[RationalLike]) -> tuple[Fraction, ...]:
        if len(x) != self.cols:
            raise ValueError("vector length does not match column count")
        xs = [as_rational(v) for v in x]
        return tuple(sum((a * v for a, v in zip(self.row(i), xs)), Fraction(0))
                     for i in range(self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = [other.column(j) for j in range(other.cols)]
        return Matrix.from_rows([
            [sum((a * b for a, b in zip(self.row(i), c)), Fraction(0)) for c in cols]
            for i in range(self.rows)
        ])

    def inverse(self) -> "Matrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("only square matrices are invertible")
        cols = [solve_linear(self, [int(i == j) for i in range(n)]) for j in range(n)]
        return Matrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])


def _integer_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    # Row scaling by a positive integer leaves the solution set unchanged.
    out = []
    for row in rows:
        scale = lcm(*(q.denominator for q in row)) if row else 1
        out.append([int(q * scale) for q in row])
    return out


def _bareiss(m: list[list[int]], ncols: int) -> tuple[list[int], int]:
    """Fraction-free row echelon form in place over the first ``ncols`` columns.

    Returns the pivot columns and the sign of the row permutation.
    """
    nrows = len(m)
    width = len(m[0]) if m else 0
    prev = 1
    sign = 1
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        piv = m[r][c]
        for i in range(r + 1, nrows):
            lead = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, width):
                # Sylvester's identity guarantees exact division.
                row_i[j] = (piv * row_i[j] - lead * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return pivots, sign


def determinant(a: Matrix) -> Fraction:
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return Fraction(1)
    rows = a.to_rows()
    scales = [lcm(*(q.denominator for q in row)) for row in rows]
    m = _integer_rows(rows)
    pivots, sign = _bareiss(m, n)
    if len(pivots) < n:
        return Fraction(0)
    denom = 1
    for s in scales:
        denom *= s
    return Fraction(sign * m[n - 1][n - 1], denom)


def _back_substitute(m: list[list[int]], pivots: list[int], nvars: int) -> list[Fraction]:
    x = [Fraction(0)] * nvars
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        acc = Fraction(m[r][nvars])
        for j in range(c + 1, nvars):
            if m[r][j]:
                acc -= m[r][j] * x[j]
        x[c] = acc / m[r][c]
    return x


def solve_linear(a: Matrix, b: Sequence[RationalLike]) -> tuple[Fraction, ...]:
    """Unique exact solution of the square system ``a @ x = b``."""
    if a.rows != a.cols:
        raise ValueError(f"expected a square matrix, got {a.rows}x{a.cols}")
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match the matrix")
    n = a.rows
    aug = [list(a.row(i)) + [as_rational(b[i])] for i in range(n)]
    m = _integer_rows(aug)
    pivots, _ = _bareiss(m, n)
    if len(pivots) < n:
        raise SingularMatrix(f"{n}x{n} matrix is singular")
    return tuple(_back_substitute(m, pivots, n))


def solve_system(a: Matrix, b: Sequence[RationalLike]) -> tuple[Fraction, ...] | None:
    """Some exact solution of a possibly rectangular system, or None if inconsistent.

    Free variables are set to zero.
    """
    if len(b) != a.rows:
        raise ValueError("right-hand side length does not match the matrix")
    n = a.cols
    aug = [list(a.row(i)) + [as_rational(b[i])] for i in range(a.rows)]
    if not aug:
        return tuple(Fraction(0) for _ in range(n))
    m = _integer_rows(aug)
    pivots, _ = _bareiss(m, n)
    if any(m[i][n] != 0 for i in range(len(pivots), a.rows)):
        return None
    return tuple(_back_substitute(m, pivots, n))


def vandermonde_matrix(r: int) -> Matrix:
    """Rows ``(1, m, m^2, ..., m^r)`` for ``m = 0..r``; ``0**0`` is 1."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    return Matrix.from_rows([[m ** i for i in range(r + 1)] for m in range(r + 1)])


def lagrange_extrapolate_coeffs(nodes: Sequence[int], target: int) -> tuple[Fraction, ...]:
    """Weights ``w`` with ``p(target) = sum(w[m] * p(nodes[m]))`` for deg p < len(nodes)."""
    if len(set(nodes)) != len(nodes):
        raise DuplicateNodes(f"interpolation nodes must be distinct: {list(nodes)}")
    out = []
    for m, xm in enumerate(nodes):
        w = Fraction(1)
        for j, xj in enumerate(nodes):
            if j != m:
                w *= Fraction(target - xj, xm - xj)
        out.append(w)
    return tuple(out)
