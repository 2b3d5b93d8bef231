"""Exact matrix arithmetic over the prime fields GF(p), p in {2, 3, 5, 7}.

Matrices are immutable tuples of row tuples with entries reduced mod p,
safe to share across threads. The row echelon convention used project-wide:
pivot entries are 1, pivot columns are otherwise zero, and pivot columns
increase strictly row by row. This fixes a unique canonical representative
for every row space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import DimensionMismatch, Singular, UnsupportedField

SUPPORTED_PRIMES = (2, 3, 5, 7)


def require_supported_prime(p: int) -> None:
    if p not in SUPPORTED_PRIMES:
        raise UnsupportedField(f"field order {p} not in {SUPPORTED_PRIMES}")


@lru_cache(maxsize=None)
def inverse_table(p: int) -> tuple[int, ...]:
    """Multiplicative inverses mod p; index 0 is unused and holds 0."""
    require_supported_prime(p)
    return tuple(pow(a, p - 2, p) if a else 0 for a in range(p))


@dataclass(frozen=True)
class FpMatrix:
    """A rows x cols matrix over GF(p), row-major, entries in [0, p)."""

    p: int
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        require_supported_prime(self.p)
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch("negative matrix dimensions")
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch("ragged rows")
            for x in row:
                if not 0 <= x < self.p:
                    raise ValueError(f"entry {x} not reduced mod {self.p}")

    @staticmethod
    def from_rows(p: int, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FpMatrix":
        """Build a matrix from nested sequences, reducing entries mod p."""
        rows = [tuple(x % p for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("cols required for a matrix with no rows")
            cols = len(rows[0])
        return FpMatrix(p, len(rows), cols, tuple(rows))

    @staticmethod
    def from_digits(p: int, lines: Sequence[str]) -> "FpMatrix":
        """Build from digit strings, one row per string ('1010', '0211', ...)."""
        return FpMatrix.from_rows(p, [[int(ch) for ch in line] for line in lines])

    @staticmethod
    def identity(p: int, d: int) -> "FpMatrix":
        return FpMatrix(p, d, d, tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "FpMatrix":
        return FpMatrix(p, rows, cols, tuple((0,) * cols for _ in range(rows)))

    def to_digits(self) -> list[str]:
        return ["".join(str(x) for x in row) for row in self.entries]

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.cols, self.rows,
                        tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def column_block(self, c0: int, c1: int) -> "FpMatrix":
        return FpMatrix(self.p, self.rows, c1 - c0, tuple(r[c0:c1] for r in self.entries))

    def scale(self, s: int) -> "FpMatrix":
        s %= self.p
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((s * x) % self.p for x in r) for r in self.entries))

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        if (self.p, self.rows, self.cols) != (other.p, other.rows, other.cols):
            raise DimensionMismatch("shape mismatch in addition")
        return FpMatrix(self.p, self.rows, self.cols,
                        tuple(tuple((x + y) % self.p for x, y in zip(r, s))
                              for r, s in zip(self.entries, other.entries)))

    def __neg__(self) -> "FpMatrix":
        return self.scale(self.p - 1)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        return self + (-other)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        return matmul(self, other)

    def is_identity(self) -> bool:
        return self == FpMatrix.identity(self.p, self.rows) if self.rows == self.cols else False


def matmul(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Matrix product over GF(p)."""
    if a.p != b.p:
        raise DimensionMismatch("field mismatch")
    if a.cols != b.rows:
        raise DimensionMismatch(f"inner dimensions {a.cols} != {b.rows}")
    p = a.p
    bt = tuple(zip(*b.entries)) if b.rows else tuple(() for _ in range(b.cols))
    ent = tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt)
                for row in a.entries)
    return FpMatrix(p, a.rows, b.cols, ent)


def hstack(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    if a.p != b.p or a.rows != b.rows:
        raise DimensionMismatch("hstack shape mismatch")
    return FpMatrix(a.p, a.rows, a.cols + b.cols,
                    tuple(r + s for r, s in zip(a.entries, b.entries)))


def vstack(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    if a.p != b.p or a.cols != b.cols:
        raise DimensionMismatch("vstack shape mismatch")
    return FpMatrix(a.p, a.rows + b.rows, a.cols, a.entries + b.entries)


def rref_rows(p: int, rows: Iterable[Sequence[int]], ncols: int) -> tuple[list[tuple[int, ...]], int, tuple[int, ...]]:
    """Reduced row echelon form on raw rows; returns (rows, rank, pivot columns).

    The returned list keeps the original row count, zero rows at the bottom.
    This is the hot-path worker; FpMatrix callers go through rref().
    """
    inv = inverse_table(p)
    work = [list(r) for r in rows]
    nrows = len(work)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if work[i][c]:
                pr = i
                break
        if pr is None:
            continue
        if pr != r:
            work[r], work[pr] = work[pr], work[r]
        s = inv[work[r][c]]
        if s != 1:
            work[r] = [(s * x) % p for x in work[r]]
        top = work[r]
        for i in range(nrows):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], top)]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in work], r, tuple(pivots)


class RrefResult(NamedTuple):
    matrix: FpMatrix
    rank: int
    pivots: tuple[int, ...]


def rref(m: FpMatrix, trim: bool = False) -> RrefResult:
    """Reduced row echelon form of m; trim drops the zero rows."""
    rows, rank, pivots = rref_rows(m.p, m.entries, m.cols)
    if trim:
        rows = rows[:rank]
    return RrefResult(FpMatrix(m.p, len(rows), m.cols, tuple(rows)), rank, pivots)


def rank(m: FpMatrix) -> int:
    return rref_rows(m.p, m.entries, m.cols)[1]


def invert(m: FpMatrix) -> FpMatrix:
    """Inverse of a square matrix, or Singular if the rank is deficient."""
    if m.rows != m.cols:
        raise DimensionMismatch("inverse of a non-square matrix")
    d = m.rows
    aug = hstack(m, FpMatrix.identity(m.p, d))
    red, rk, _ = rref(aug)
    if rk < d:
        raise Singular(f"rank {rk} < {d}")
    return red.column_block(d, 2 * d)


def is_invertible(m: FpMatrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def right_kernel(m: FpMatrix) -> FpMatrix:
    """Rows form a basis of {v : m @ v^T = 0}; (cols - rank) of them."""
    red, rk, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    rows = []
    for f in free:
        v = [0] * m.cols
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red.entries[i][f]) % m.p
        rows.append(tuple(v))
    return FpMatrix(m.p, len(rows), m.cols, tuple(rows))
