"""The middle Grassmannian of GF(p)^{2n} and its two graphs.

Vertices are the n-subspaces; two are adjacent when their intersection is a
hyperplane of each, distant when they are complementary. Both relations are
precomputed as per-vertex bitmask rows, which makes clique search, BFS and
the distant-only reconstruction of adjacency cheap at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    AmbientMismatch,
    BadCarrierDimension,
    BadCentreDimension,
    BadFlag,
    NotInGrassmannian,
    ResourceLimit,
    Singular,
)
from .gfcore import FpMatrix, is_invertible, matmul, require_supported_prime
from .subspace import (
    Subspace,
    annihilator,
    contains,
    enumerate_subspaces,
    gaussian_binomial,
    intersect,
    span,
    sum_subspaces,
)

MAX_ELEMENTS = 100_000
MEET_TABLE_LIMIT = 5_000  # keep the dense pairwise meet-dimension matrix up to this size


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


def _require_middle(x: Subspace) -> int:
    if x.ambient % 2 or x.dim * 2 != x.ambient:
        raise NotInGrassmannian(f"dim {x.dim} in ambient {x.ambient}")
    return x.dim


def is_adjacent(x: Subspace, y: Subspace) -> bool:
    """Both quotients over the intersection are one-dimensional."""
    n = _require_middle(x)
    if _require_middle(y) != n or x.p != y.p:
        raise NotInGrassmannian("subspaces from different Grassmannians")
    m = intersect(x, y)
    return x.dim - m.dim == 1 and y.dim - m.dim == 1


def is_distant(x: Subspace, y: Subspace) -> bool:
    """Complementary subspaces: trivial meet and full join."""
    n = _require_middle(x)
    if _require_middle(y) != n or x.p != y.p:
        raise NotInGrassmannian("subspaces from different Grassmannians")
    return intersect(x, y).dim == 0 and sum_subspaces(x, y).dim == x.ambient


@lru_cache(maxsize=None)
def _rank_table(p: int, n: int) -> np.ndarray:
    """rank of an n x n matrix over GF(p), indexed by base-p row-major code."""
    from .gfcore import rref_rows

    size = p ** (n * n)
    tab = np.empty(size, dtype=np.uint8)
    for code in range(size):
        digits = []
        c = code
        for _ in range(n * n):
            digits.append(c % p)
            c //= p
        rows = [digits[i * n:(i + 1) * n] for i in range(n)]
        tab[code] = rref_rows(p, rows, n)[1]
    return tab


def _mask_from_bools(flags: np.ndarray) -> int:
    return int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")


def compute_relations(elements: Sequence[Subspace], p: int, n: int):
    """Adjacency/distant bit rows (and the meet-dim matrix when small).

    For each X the rows of every Y are reduced against the echelon basis of
    X; the residues live on the non-pivot columns, so dim(X meet Y) is
    n - rank of an n x n digit matrix, looked up from a precomputed table.
    """
    count = len(elements)
    d = 2 * n
    basis = np.array([e.basis.entries for e in elements], dtype=np.int64)
    ranktab = _rank_table(p, n)
    powers = p ** np.arange(n * n, dtype=np.int64)
    keep = count <= MEET_TABLE_LIMIT
    meet = np.empty((count, count), dtype=np.uint8) if keep else None
    adj_rows = []
    dist_rows = []
    for i in range(count):
        piv = list(elements[i].pivots)
        nonpiv = [c for c in range(d) if c not in elements[i].pivots]
        coef = basis[:, :, piv]
        red = (basis - coef @ basis[i]) % p
        proj = red[:, :, nonpiv].reshape(count, n * n)
        ranks = ranktab[proj @ powers]
        meetdim = n - ranks
        if keep:
            meet[i] = meetdim
        adj_rows.append(_mask_from_bools(meetdim == n - 1) & ~(1 << i))
        dist_rows.append(_mask_from_bools(meetdim == 0))
    return adj_rows, dist_rows, meet


class GrassmannianIndex:
    """Enumerated Grassmannian with integer handles and relation bit rows.

    Immutable after construction; all queries are read-only.
    """

    def __init__(self, p: int, n: int, elements: Sequence[Subspace],
                 adj_rows: Sequence[int], dist_rows: Sequence[int],
                 meet_table: np.ndarray | None):
        self.p = p
        self.n = n
        self.ambient = 2 * n
        self.elements = tuple(elements)
        self.adj_rows = tuple(adj_rows)
        self.dist_rows = tuple(dist_rows)
        self._meet = meet_table
        self._handles = {e: i for i, e in enumerate(self.elements)}
        self._derived_adj: tuple[int, ...] | None = None
        self.universe = (1 << len(self.elements)) - 1

    def __len__(self) -> int:
        return len(self.elements)

    def handle_of(self, s: Subspace) -> int:
        try:
            return self._handles[s]
        except KeyError:
            raise NotInGrassmannian(f"not an element of G({self.p},{self.n})") from None

    def subspace(self, h: int) -> Subspace:
        return self.elements[h]

    def adjacent(self, i: int, j: int) -> bool:
        return bool(self.adj_rows[i] >> j & 1)

    def distant(self, i: int, j: int) -> bool:
        return bool(self.dist_rows[i] >> j & 1)

    def meet_dim(self, i: int, j: int) -> int:
        if self._meet is not None:
            return int(self._meet[i, j])
        return intersect(self.elements[i], self.elements[j]).dim

    @property
    def derived_adjacency_rows(self) -> tuple[int, ...]:
        """Adjacency reconstructed from the distant rows alone; cached."""
        if self._derived_adj is None:
            count = len(self.elements)
            rows = [0] * count
            for a in range(count):
                for b in range(a + 1, count):
                    if adjacent_via_distant(self, a, b):
                        rows[a] |= 1 << b
                        rows[b] |= 1 << a
            self._derived_adj = tuple(rows)
        return self._derived_adj


def build_index(p: int, n: int, max_elements: int = MAX_ELEMENTS) -> GrassmannianIndex:
    """Enumerate G(p, n) and precompute both relation bit rows."""
    require_supported_prime(p)
    if not 1 <= n <= 3:
        raise ResourceLimit(f"n={n} outside the supported range 1..3")
    count = gaussian_binomial(2 * n, n, p)
    if count > max_elements:
        raise ResourceLimit(f"|G({p},{n})| = {count} exceeds the guard {max_elements}")
    elements = enumerate_subspaces(p, 2 * n, n)
    adj_rows, dist_rows, meet = compute_relations(elements, p, n)
    return GrassmannianIndex(p, n, elements, adj_rows, dist_rows, meet)


@dataclass(frozen=True)
class CliqueLabel:
    """A star (all middle subspaces over a centre) or a top (all under a carrier)."""

    kind: str  # "star" | "top"
    carrier: Subspace  # centre for a star, carrier for a top
    members: tuple[int, ...]  # sorted handles

    def mask(self) -> int:
        m = 0
        for h in self.members:
            m |= 1 << h
        return m


def _check_same_space(index: GrassmannianIndex, s: Subspace) -> None:
    if s.p != index.p or s.ambient != index.ambient:
        raise AmbientMismatch("subspace does not live in the indexed space")


def star(index: GrassmannianIndex, centre: Subspace) -> CliqueLabel:
    """All elements of G containing the centre as a hyperplane."""
    _check_same_space(index, centre)
    if centre.dim != index.n - 1:
        raise BadCentreDimension(f"centre dim {centre.dim}, expected {index.n - 1}")
    members = tuple(h for h, e in enumerate(index.elements) if contains(e, centre))
    return CliqueLabel("star", centre, members)


def top(index: GrassmannianIndex, carrier: Subspace) -> CliqueLabel:
    """All elements of G that are hyperplanes of the carrier."""
    _check_same_space(index, carrier)
    if carrier.dim != index.n + 1:
        raise BadCarrierDimension(f"carrier dim {carrier.dim}, expected {index.n + 1}")
    members = tuple(h for h, e in enumerate(index.elements) if contains(carrier, e))
    return CliqueLabel("top", carrier, members)


def maximal_adjacency_cliques(index: GrassmannianIndex) -> tuple[CliqueLabel, ...]:
    """All stars and tops, each verified maximal against the adjacency rows.

    For n >= 2 these are exactly the maximal adjacency cliques; the generic
    branch-and-bound oracle cross-checks that in the verification suites.
    """
    labels = [star(index, m) for m in enumerate_subspaces(index.p, index.ambient, index.n - 1)]
    labels += [top(index, s) for s in enumerate_subspaces(index.p, index.ambient, index.n + 1)]
    for label in labels:
        common = index.universe
        for h in label.members:
            common &= index.adj_rows[h]
        if common:
            raise RuntimeError(f"{label.kind} with carrier {label.carrier} is not maximal")
    return tuple(labels)


def bron_kerbosch_maximal_cliques(rows: Sequence[int]) -> list[int]:
    """Generic maximal-clique oracle over bitmask adjacency rows.

    Pivot-based branch and bound; returns one bitmask per maximal clique.
    Used only as a cross-check on small graphs.
    """
    count = len(rows)
    out: list[int] = []

    def expand(r: int, cand: int, excl: int) -> None:
        if not cand and not excl:
            out.append(r)
            return
        pool = cand | excl
        pivot = max(iter_bits(pool), key=lambda v: (cand & rows[v]).bit_count())
        rest = cand & ~rows[pivot]
        for v in iter_bits(rest):
            bit = 1 << v
            expand(r | bit, cand & rows[v], excl & rows[v])
            cand &= ~bit
            excl |= bit

    expand(0, (1 << count) - 1, 0)
    return out


@dataclass(frozen=True)
class Pencil:
    """All elements strictly between a centre (dim n-1) and a carrier (dim n+1)."""

    centre: Subspace
    carrier: Subspace
    members: tuple[int, ...]  # sorted handles; always p + 1 of them


def pencil(index: GrassmannianIndex, centre: Subspace, carrier: Subspace) -> Pencil:
    _check_same_space(index, centre)
    _check_same_space(index, carrier)
    if centre.dim != index.n - 1 or carrier.dim != index.n + 1 or not contains(carrier, centre):
        raise BadFlag("need centre < carrier with dims n-1 and n+1")
    members = tuple(h for h, e in enumerate(index.elements)
                    if contains(e, centre) and contains(carrier, e))
    return Pencil(centre, carrier, members)


def pencils_from_flags(index: GrassmannianIndex) -> tuple[Pencil, ...]:
    """All pencils, one per incident (centre, carrier) flag."""
    carriers = enumerate_subspaces(index.p, index.ambient, index.n + 1)
    out = []
    for centre in enumerate_subspaces(index.p, index.ambient, index.n - 1):
        for carrier in carriers:
            if contains(carrier, centre):
                out.append(pencil(index, centre, carrier))
    return tuple(out)


def pencils_from_cliques(index: GrassmannianIndex) -> tuple[Pencil, ...]:
    """Pencils recovered as >=2-element intersections of distinct maximal cliques."""
    cliques = maximal_adjacency_cliques(index)
    masks = [c.mask() for c in cliques]
    member_sets = set()
    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            inter = masks[i] & masks[j]
            if inter.bit_count() >= 2:
                member_sets.add(inter)
    out = []
    for mask in sorted(member_sets):
        members = tuple(iter_bits(mask))
        e0, e1 = index.elements[members[0]], index.elements[members[1]]
        out.append(Pencil(intersect(e0, e1), sum_subspaces(e0, e1), members))
    out.sort(key=lambda pc: pc.members)
    return tuple(out)


def adjacent_via_distant(index: GrassmannianIndex, a: int, b: int,
                         return_witness: bool = False):
    """Adjacency defined through the distant relation alone.

    Distinct a, b are adjacent iff some witness C outside {a, b} has every
    complement of C complementary to a or to b.
    """
    if a == b:
        raise ValueError("handles must be distinct")
    rows = index.dist_rows
    covered = rows[a] | rows[b]
    for c in range(len(index)):
        if c == a or c == b:
            continue
        if rows[c] & ~covered & index.universe == 0:
            return (True, c) if return_witness else True
    return (False, None) if return_witness else False


def bfs_distances(rows: Sequence[int], source: int, count: int) -> list[int]:
    """Exact graph distances from source over bitmask rows; -1 unreachable."""
    dist = [-1] * count
    dist[source] = 0
    frontier = 1 << source
    visited = frontier
    level = 0
    while frontier:
        reach = 0
        for v in iter_bits(frontier):
            reach |= rows[v]
        frontier = reach & ~visited
        visited |= frontier
        level += 1
        for v in iter_bits(frontier):
            dist[v] = level
    return dist


@dataclass(frozen=True)
class GraphMetrics:
    connected: bool
    diameter: int
    eccentricities: tuple[int, ...]


def graph_metrics(index: GrassmannianIndex, relation: str) -> GraphMetrics:
    """BFS-exact connectivity, diameter and per-vertex eccentricities."""
    if relation == "adjacency":
        rows = index.adj_rows
    elif relation == "distant":
        rows = index.dist_rows
    else:
        raise ValueError(f"relation must be 'adjacency' or 'distant', got {relation!r}")
    count = len(index)
    ecc = []
    connected = True
    for src in range(count):
        dist = bfs_distances(rows, src, count)
        if min(dist) < 0:
            connected = False
            ecc.append(-1)
        else:
            ecc.append(max(dist))
    diameter = max(ecc) if connected else -1
    return GraphMetrics(connected, diameter, tuple(ecc))


def distant_via_grassmann_distance(index: GrassmannianIndex, x: int, y: int) -> bool:
    """True iff the Grassmann-graph distance of x and y equals n."""
    dist = bfs_distances(index.adj_rows, x, len(index))
    return dist[y] == index.n


def induced_map(index: GrassmannianIndex, g: FpMatrix) -> tuple[int, ...]:
    """Handle permutation induced by an invertible map acting on row vectors."""
    if g.rows != index.ambient or g.cols != index.ambient or g.p != index.p:
        raise AmbientMismatch("map must be 2n x 2n over the same field")
    if not is_invertible(g):
        raise Singular("map is not invertible")
    perm = []
    for e in index.elements:
        image = span(index.p, index.ambient, matmul(e.basis, g).entries)
        perm.append(index.handle_of(image))
    return tuple(perm)


def induced_duality(index: GrassmannianIndex) -> tuple[int, ...]:
    """Handle permutation of the annihilator duality; swaps stars and tops."""
    return tuple(index.handle_of(annihilator(e)) for e in index.elements)
