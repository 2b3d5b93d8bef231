"""The projective line over the matrix ring M_n(GF(p)) as a model of G.

A point is a left-equivalence class of full-rank n x 2n block pairs
(alpha | beta), stored as the canonical echelon representative. Mapping a
point to the row space of its block identifies the line with the middle
Grassmannian; GL(2) over the matrix ring acts on the right and transports
to invertible linear maps of the ambient space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from random import Random
from typing import Iterable, Sequence

from .errors import (
    BadFrame,
    DimensionMismatch,
    NotAdmissible,
    NotMutuallyDistant,
    Singular,
)
from .gfcore import FpMatrix, hstack, invert, is_invertible, matmul, rref_rows, vstack
from .grassmann import GrassmannianIndex, induced_map, is_distant
from .subspace import Subspace, span


@dataclass(frozen=True)
class Frame:
    """Two complementary middle subspaces plus an isomorphism between them.

    The isomorphism is an invertible n x n matrix mapping coordinates in the
    canonical basis of `base` to coordinates in the canonical basis of
    `target`.
    """

    base: Subspace
    target: Subspace
    iso: FpMatrix

    def __post_init__(self) -> None:
        if not is_distant(self.base, self.target):
            raise BadFrame("frame subspaces must be complementary")
        n = self.base.dim
        if self.iso.p != self.base.p or self.iso.rows != n or self.iso.cols != n:
            raise BadFrame("isomorphism must be n x n over the same field")
        if not is_invertible(self.iso):
            raise BadFrame("isomorphism matrix is singular")

    @staticmethod
    def standard(p: int, n: int) -> "Frame":
        """First-half coordinates, second-half coordinates, identity map."""
        first = span(p, 2 * n, FpMatrix.identity(p, 2 * n).entries[:n])
        second = span(p, 2 * n, FpMatrix.identity(p, 2 * n).entries[n:])
        return Frame(first, second, FpMatrix.identity(p, n))

    def is_standard(self) -> bool:
        p, n = self.base.p, self.base.dim
        return self == Frame.standard(p, n)

    def change_of_basis(self) -> FpMatrix:
        """The 2n x 2n matrix whose rows are the two canonical bases stacked."""
        return vstack(self.base.basis, self.target.basis)


@dataclass(frozen=True)
class RingPoint:
    """A point of the projective line over M_n(GF(p)), canonically stored."""

    p: int
    n: int
    block: FpMatrix  # n x 2n, reduced echelon, rank n

    @staticmethod
    def from_block(m: FpMatrix) -> "RingPoint":
        if m.cols != 2 * m.rows:
            raise DimensionMismatch("block must be n x 2n")
        rows, rank, _ = rref_rows(m.p, m.entries, m.cols)
        if rank < m.rows:
            raise NotAdmissible(f"block rank {rank} < {m.rows}")
        return RingPoint(m.p, m.rows, FpMatrix(m.p, m.rows, m.cols, tuple(rows)))

    @property
    def alpha(self) -> FpMatrix:
        return self.block.column_block(0, self.n)

    @property
    def beta(self) -> FpMatrix:
        return self.block.column_block(self.n, 2 * self.n)


def make_point(alpha: FpMatrix, beta: FpMatrix) -> RingPoint:
    """Point with representative pair (alpha, beta); admissible iff rank n."""
    if alpha.p != beta.p or alpha.rows != alpha.cols or beta.rows != beta.cols \
            or alpha.rows != beta.rows:
        raise DimensionMismatch("alpha and beta must be square of equal size")
    return RingPoint.from_block(hstack(alpha, beta))


def origin(p: int, n: int) -> RingPoint:
    return make_point(FpMatrix.identity(p, n), FpMatrix.zeros(p, n, n))


def infinity(p: int, n: int) -> RingPoint:
    return make_point(FpMatrix.zeros(p, n, n), FpMatrix.identity(p, n))


def unit(p: int, n: int) -> RingPoint:
    return make_point(FpMatrix.identity(p, n), FpMatrix.identity(p, n))


def to_grassmannian(pt: RingPoint, frame: Frame | None = None) -> Subspace:
    """Image of a ring point in G for the given frame.

    With the standard frame this is literally the row space of the stored
    block; in general the alpha block feeds the base and the beta block is
    routed through the frame isomorphism into the target.
    """
    p, n = pt.p, pt.n
    if frame is None or frame.is_standard():
        return Subspace(p, 2 * n, pt.block)
    rows = matmul(pt.alpha, frame.base.basis) + matmul(matmul(pt.beta, frame.iso), frame.target.basis)
    return span(p, 2 * n, rows.entries)


def point_of(s: Subspace) -> RingPoint:
    """Standard-frame preimage of a Grassmannian element."""
    if s.ambient != 2 * s.dim:
        raise NotAdmissible("subspace is not middle-dimensional")
    return RingPoint(s.p, s.dim, s.basis)


def ring_distant(a: RingPoint, b: RingPoint) -> bool:
    """Distant on the ring line: the stacked representatives are invertible."""
    if (a.p, a.n) != (b.p, b.n):
        raise DimensionMismatch("points from different ring lines")
    return rref_rows(a.p, a.block.entries + b.block.entries, 2 * a.n)[1] == 2 * a.n


def _block2(a: FpMatrix, b: FpMatrix, c: FpMatrix, d: FpMatrix) -> FpMatrix:
    return vstack(hstack(a, b), hstack(c, d))


@dataclass(frozen=True)
class GL2Element:
    """An invertible 2 x 2 matrix over M_n(GF(p)), i.e. four n x n blocks."""

    a: FpMatrix
    b: FpMatrix
    c: FpMatrix
    d: FpMatrix

    def __post_init__(self) -> None:
        n = self.a.rows
        for blk in (self.a, self.b, self.c, self.d):
            if blk.rows != n or blk.cols != n or blk.p != self.a.p:
                raise DimensionMismatch("blocks must be square of equal size")
        if not is_invertible(self.matrix):
            raise Singular("assembled block matrix is singular")

    @cached_property
    def matrix(self) -> FpMatrix:
        return _block2(self.a, self.b, self.c, self.d)

    @staticmethod
    def from_matrix(m: FpMatrix) -> "GL2Element":
        if m.rows != m.cols or m.rows % 2:
            raise DimensionMismatch("need an even-sized square matrix")
        n = m.rows // 2
        topb, botb = m.entries[:n], m.entries[n:]
        return GL2Element(FpMatrix(m.p, n, n, tuple(r[:n] for r in topb)),
                          FpMatrix(m.p, n, n, tuple(r[n:] for r in topb)),
                          FpMatrix(m.p, n, n, tuple(r[:n] for r in botb)),
                          FpMatrix(m.p, n, n, tuple(r[n:] for r in botb)))

    @staticmethod
    def identity(p: int, n: int) -> "GL2Element":
        return GL2Element(FpMatrix.identity(p, n), FpMatrix.zeros(p, n, n),
                          FpMatrix.zeros(p, n, n), FpMatrix.identity(p, n))

    def inverse(self) -> "GL2Element":
        return GL2Element.from_matrix(invert(self.matrix))

    def __matmul__(self, other: "GL2Element") -> "GL2Element":
        # Right-action convention: act(x @ y, pt) == act(y, act(x, pt)).
        return GL2Element.from_matrix(matmul(self.matrix, other.matrix))


def act(psi: GL2Element, pt: RingPoint) -> RingPoint:
    """Right action (alpha, beta) -> (alpha a + beta c, alpha b + beta d)."""
    return RingPoint.from_block(matmul(pt.block, psi.matrix))


def to_linear_map(psi: GL2Element, frame: Frame | None = None) -> FpMatrix:
    """The invertible 2n x 2n map of V transported from psi through the frame."""
    if frame is None:
        return psi.matrix
    p = psi.a.p
    n = psi.a.rows
    m = frame.change_of_basis()
    lam = frame.iso
    left = _block2(FpMatrix.identity(p, n), FpMatrix.zeros(p, n, n),
                   FpMatrix.zeros(p, n, n), invert(lam))
    right = _block2(FpMatrix.identity(p, n), FpMatrix.zeros(p, n, n),
                    FpMatrix.zeros(p, n, n), lam)
    return matmul(matmul(matmul(matmul(invert(m), left), psi.matrix), right), m)


def standard_chain(p: int, n: int) -> frozenset[RingPoint]:
    """The p + 1 scalar-pair points R(xI, yI); pairwise distant."""
    eye = FpMatrix.identity(p, n)
    pts = [make_point(eye, eye.scale(0))]
    for x in range(p):
        pts.append(make_point(eye.scale(x), eye))
    return frozenset(pts)


def chain_orbit(p: int, n: int, psis: Iterable[GL2Element]) -> set[frozenset[RingPoint]]:
    """Images of the standard chain under the given group elements, deduplicated."""
    base = standard_chain(p, n)
    return {frozenset(act(psi, pt) for pt in base) for psi in psis}


def pair_witness(a: RingPoint, b: RingPoint) -> GL2Element:
    """A group element sending (origin, infinity) to the distant pair (a, b)."""
    stacked = vstack(a.block, b.block)
    if not is_invertible(stacked):
        raise NotMutuallyDistant("points are not distant")
    return GL2Element.from_matrix(stacked)


def triple_witness(a: RingPoint, b: RingPoint, c: RingPoint) -> GL2Element:
    """A group element sending (origin, infinity, unit) to the distant triple."""
    psi0 = pair_witness(a, b)
    c0 = act(psi0.inverse(), c)
    sigma, tau = c0.alpha, c0.beta
    if not (is_invertible(sigma) and is_invertible(tau)):
        raise NotMutuallyDistant("third point is not distant from the first two")
    mu = matmul(invert(sigma), tau)
    p, n = a.p, a.n
    diag = GL2Element(FpMatrix.identity(p, n), FpMatrix.zeros(p, n, n),
                      FpMatrix.zeros(p, n, n), mu)
    return diag @ psi0


def all_invertible_matrices(p: int, d: int) -> list[FpMatrix]:
    """Every invertible d x d matrix over GF(p), in a deterministic order.

    Rows are extended one at a time, skipping vectors in the span of the
    chosen prefix; intended for small (p, d) such as GL(4, 2).
    """
    vecs = list(itertools.product(range(p), repeat=d))
    zero = vecs[0]
    out: list[FpMatrix] = []

    def extend(rows: list[tuple[int, ...]], span_set: set[tuple[int, ...]]) -> None:
        if len(rows) == d:
            out.append(FpMatrix(p, d, d, tuple(rows)))
            return
        for v in vecs:
            if v in span_set:
                continue
            bigger = set(span_set)
            for s in span_set:
                for coef in range(1, p):
                    bigger.add(tuple((x + coef * y) % p for x, y in zip(s, v)))
            rows.append(v)
            extend(rows, bigger)
            rows.pop()

    extend([], {zero})
    return out


def random_invertible(rng: Random, p: int, d: int) -> FpMatrix:
    while True:
        m = FpMatrix(p, d, d, tuple(tuple(rng.randrange(p) for _ in range(d))
                                    for _ in range(d)))
        if is_invertible(m):
            return m


def random_gl2(rng: Random, p: int, n: int) -> GL2Element:
    return GL2Element.from_matrix(random_invertible(rng, p, 2 * n))


def enumerate_ring_points(p: int, n: int) -> list[RingPoint]:
    """All ring-line points by brute force over every raw (alpha | beta) pair.

    Exponential in n^2; independent of the subspace enumeration, so it serves
    as the counting oracle for the model report.
    """
    seen = set()
    width = 2 * n
    for flat in itertools.product(range(p), repeat=2 * n * n):
        rows = [flat[i * width:(i + 1) * width] for i in range(n)]
        red, rank, _ = rref_rows(p, rows, width)
        if rank == n:
            seen.add(tuple(red[:n]))
    return [RingPoint(p, n, FpMatrix(p, n, width, ent)) for ent in sorted(seen)]


@dataclass(frozen=True)
class ModelReport:
    """Outcome of checking the ring-line model against the indexed Grassmannian."""

    ring_points: int
    grassmann_points: int
    injective: bool
    surjective: bool
    distant_pairs_ring: int
    distant_pairs_graph: int
    distant_agrees: bool

    @property
    def ok(self) -> bool:
        return (self.ring_points == self.grassmann_points and self.injective
                and self.surjective and self.distant_agrees
                and self.distant_pairs_ring == self.distant_pairs_graph)


def model_report(index: GrassmannianIndex) -> ModelReport:
    """Count the ring line by brute force and compare both structures with G."""
    pts = enumerate_ring_points(index.p, index.n)
    images = [to_grassmannian(pt) for pt in pts]
    handles = [index.handle_of(s) for s in images]
    injective = len(set(handles)) == len(pts)
    surjective = len(set(handles)) == len(index)
    ring_pairs = 0
    graph_pairs = 0
    agrees = True
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            rd = ring_distant(pts[i], pts[j])
            gd = index.distant(handles[i], handles[j])
            ring_pairs += rd
            graph_pairs += gd
            agrees &= rd == gd
    return ModelReport(len(pts), len(index), injective, surjective,
                       ring_pairs, graph_pairs, agrees)


def equivariance_violations(index: GrassmannianIndex, psis: Sequence[GL2Element]) -> tuple[int, int]:
    """Check act-then-map against map-then-act for every point; (checked, bad)."""
    checked = 0
    bad = 0
    for psi in psis:
        perm = induced_map(index, to_linear_map(psi))
        for h, element in enumerate(index.elements):
            pt = point_of(element)
            image = to_grassmannian(act(psi, pt))
            checked += 1
            if index.handle_of(image) != perm[h]:
                bad += 1
    return checked, bad
