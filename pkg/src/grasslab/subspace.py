"""Canonical subspace calculus over GF(p)^d.

A Subspace is stored as its trimmed reduced row echelon basis, which makes
value equality coincide with subspace equality and gives a deterministic
enumeration order (lexicographic on the flattened basis).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import AmbientMismatch, DimensionMismatch
from .gfcore import FpMatrix, require_supported_prime, rref_rows


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient in canonical form."""

    p: int
    ambient: int
    basis: FpMatrix  # trimmed RREF, no zero rows

    def __post_init__(self) -> None:
        require_supported_prime(self.p)
        b = self.basis
        if b.p != self.p or b.cols != self.ambient or b.rows > self.ambient:
            raise DimensionMismatch("basis shape does not match ambient space")
        # Structural RREF check: nonzero rows, unit leading entries on strictly
        # increasing columns, pivot columns elsewhere zero.
        last = -1
        pivots = []
        for row in b.entries:
            lead = next((j for j, x in enumerate(row) if x), None)
            if lead is None or lead <= last or row[lead] != 1:
                raise ValueError("basis is not in trimmed reduced echelon form")
            pivots.append(lead)
            last = lead
        for i, c in enumerate(pivots):
            for k in range(b.rows):
                if k != i and b.entries[k][c] != 0:
                    raise ValueError("pivot column is not cleared")

    @property
    def dim(self) -> int:
        return self.basis.rows

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis.entries)

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return self.basis.entries

    @staticmethod
    def from_digits(p: int, lines: Sequence[str], ambient: int | None = None) -> "Subspace":
        """Span of digit-string rows; canonicalized."""
        if not lines:
            if ambient is None:
                raise DimensionMismatch("ambient required for the zero subspace")
            return zero_subspace(p, ambient)
        rows = [[int(ch) for ch in line] for line in lines]
        return span(p, len(rows[0]), rows)

    def contains_vector(self, v: Sequence[int]) -> bool:
        return not any(reduce_vector(self, v))

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of v in the canonical basis; v must lie in the subspace."""
        if len(v) != self.ambient:
            raise DimensionMismatch("vector length does not match ambient")
        c = tuple(v[j] % self.p for j in self.pivots)
        if from_coords(self, c) != tuple(x % self.p for x in v):
            raise ValueError("vector is not in the subspace")
        return c

    def point_vectors(self) -> list[tuple[int, ...]]:
        """Canonical representative vectors of the (p^dim - 1)/(p - 1) points."""
        return [from_coords(self, c) for c in projective_reps(self.p, self.dim)]

    def __le__(self, other: "Subspace") -> bool:
        return contains(other, self)

    def __add__(self, other: "Subspace") -> "Subspace":
        return sum_subspaces(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)


def _check_pair(a: Subspace, b: Subspace) -> None:
    if a.p != b.p or a.ambient != b.ambient:
        raise AmbientMismatch("subspaces live in different spaces")


def reduce_vector(s: Subspace, v: Sequence[int]) -> tuple[int, ...]:
    """Residue of v after eliminating the pivots of s; zero iff v is in s."""
    p = s.p
    if len(v) != s.ambient:
        raise DimensionMismatch("vector length does not match ambient")
    w = [x % p for x in v]
    for row, c in zip(s.basis.entries, s.pivots):
        f = w[c]
        if f:
            w = [(x - f * y) % p for x, y in zip(w, row)]
    return tuple(w)


def from_coords(s: Subspace, c: Sequence[int]) -> tuple[int, ...]:
    p = s.p
    v = [0] * s.ambient
    for ci, row in zip(c, s.basis.entries):
        if ci % p:
            v = [(x + ci * y) % p for x, y in zip(v, row)]
    return tuple(v)


def projective_reps(p: int, k: int) -> Iterator[tuple[int, ...]]:
    """Vectors of GF(p)^k with first nonzero entry 1, one per 1-subspace."""
    for lead in range(k):
        for tail in itertools.product(range(p), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


def zero_subspace(p: int, ambient: int) -> Subspace:
    return Subspace(p, ambient, FpMatrix(p, 0, ambient, ()))


def full_space(p: int, ambient: int) -> Subspace:
    return Subspace(p, ambient, FpMatrix.identity(p, ambient))


def span(p: int, ambient: int, vectors: Iterable[Sequence[int]]) -> Subspace:
    """Canonical row space of the given vectors."""
    vecs = [tuple(x % p for x in v) for v in vectors]
    for v in vecs:
        if len(v) != ambient:
            raise DimensionMismatch("vector length does not match ambient")
    rows, rk, _ = rref_rows(p, vecs, ambient)
    return Subspace(p, ambient, FpMatrix(p, rk, ambient, tuple(rows[:rk])))


def sum_subspaces(a: Subspace, b: Subspace) -> Subspace:
    """Smallest subspace containing both."""
    _check_pair(a, b)
    return span(a.p, a.ambient, a.basis.entries + b.basis.entries)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Intersection via the Zassenhaus double-block reduction."""
    _check_pair(a, b)
    p, d = a.p, a.ambient
    block = [row + row for row in a.basis.entries]
    block += [row + (0,) * d for row in b.basis.entries]
    rows, _, _ = rref_rows(p, block, 2 * d)
    inter = [row[d:] for row in rows if not any(row[:d]) and any(row[d:])]
    return span(p, d, inter)


def contains(a: Subspace, b: Subspace) -> bool:
    """True iff b <= a."""
    _check_pair(a, b)
    if b.dim > a.dim:
        return False
    return all(not any(reduce_vector(a, row)) for row in b.basis.entries)


def annihilator(a: Subspace) -> Subspace:
    """Orthogonal complement w.r.t. the standard dot product; an involution."""
    from .gfcore import right_kernel

    ker = right_kernel(a.basis) if a.dim else FpMatrix.identity(a.p, a.ambient)
    return span(a.p, a.ambient, ker.entries)


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-subspaces of GF(p)^d."""
    if k < 0 or k > d:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    return num // den


def enumerate_subspaces(p: int, ambient: int, k: int) -> tuple[Subspace, ...]:
    """All k-subspaces of GF(p)^ambient, canonically ordered.

    Iterates echelon pivot profiles and free entries, so every subspace is
    produced exactly once without dedup hashing; the result is then sorted
    lexicographically on the flattened basis.
    """
    require_supported_prime(p)
    if not 0 <= k <= ambient:
        raise DimensionMismatch(f"k={k} out of range for ambient {ambient}")
    out = []
    for pivots in itertools.combinations(range(ambient), k):
        pivot_set = set(pivots)
        free = [(i, j) for i in range(k) for j in range(pivots[i] + 1, ambient)
                if j not in pivot_set]
        base = [[0] * ambient for _ in range(k)]
        for i, c in enumerate(pivots):
            base[i][c] = 1
        for values in itertools.product(range(p), repeat=len(free)):
            rows = [row[:] for row in base]
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            ent = tuple(tuple(r) for r in rows)
            out.append(Subspace(p, ambient, FpMatrix(p, k, ambient, ent)))
    out.sort(key=Subspace.sort_key)
    return tuple(out)


def format_subspaces(p: int, ambient: int, subs: Iterable[Subspace]) -> str:
    """Text format: header 'p d', then digit rows per subspace, blank-line separated."""
    lines = [f"{p} {ambient}"]
    for s in subs:
        lines.append("")
        lines.extend(s.basis.to_digits())
    lines.append("")
    return "\n".join(lines)


def parse_subspaces(text: str) -> tuple[int, int, list[Subspace]]:
    """Inverse of format_subspaces; validates canonical form of every block."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("empty subspace text")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header {lines[0]!r}")
    p, ambient = int(head[0]), int(head[1])
    subs = []
    block: list[str] = []
    for line in lines[1:] + [""]:
        line = line.strip()
        if line:
            block.append(line)
        elif block:
            rows = [[int(ch) for ch in b] for b in block]
            for r in rows:
                if len(r) != ambient:
                    raise ValueError("row width does not match header")
            subs.append(Subspace(p, ambient, FpMatrix.from_rows(p, rows, ambient)))
            block = []
    return p, ambient, subs
