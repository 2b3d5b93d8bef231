"""Reguli over the scalar field: maximal distant cliques closed under transversals.

A regulus is a set of p + 1 pairwise complementary middle subspaces such
that every line meeting three members meets all of them and the set cannot
be enlarged. Each frame (two complementary subspaces plus an isomorphism)
carries one: the graphs of the scalar multiples of the isomorphism. The
lines joining matched point pairs are the directrices; they are exactly the
transversals of the family.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from random import Random
from typing import Iterable, Sequence

from .errors import (
    NotADirectrix,
    NotDistantClique,
    NotMutuallyDistant,
    TooFewMembers,
    ZeroVector,
)
from .gfcore import FpMatrix, invert, matmul, rref_rows, vstack
from .grassmann import GrassmannianIndex, is_distant, iter_bits
from .ringline import Frame
from .subspace import (
    Subspace,
    from_coords,
    intersect,
    projective_reps,
    reduce_vector,
    span,
)


@dataclass(frozen=True)
class Regulus:
    """A regulus with its directrix family, members sorted canonically."""

    members: tuple[Subspace, ...]
    directrices: tuple[Subspace, ...]


def directrix_through(frame: Frame, u: Sequence[int]) -> Subspace:
    """The line joining a nonzero u of the frame base with its isomorphic image."""
    p = frame.base.p
    if not any(x % p for x in u):
        raise ZeroVector("directrix needs a nonzero vector")
    coords = frame.base.coords(u)
    image = from_coords(frame.target, matmul(FpMatrix.from_rows(p, [coords]), frame.iso).entries[0])
    return span(p, frame.base.ambient, [tuple(u), image])


def frame_regulus(frame: Frame) -> Regulus:
    """The p + 1 graph subspaces of the scalar multiples of the frame isomorphism."""
    p = frame.base.p
    ambient = frame.base.ambient
    iso_target = matmul(frame.iso, frame.target.basis)
    members = []
    for x, y in projective_reps(p, 2):
        rows = frame.base.basis.scale(x) + iso_target.scale(y)
        member = span(p, ambient, rows.entries)
        assert member.dim == frame.base.dim
        members.append(member)
    directrices = [directrix_through(frame, u) for u in frame.base.point_vectors()]
    return Regulus(tuple(sorted(members, key=Subspace.sort_key)),
                   tuple(sorted(directrices, key=Subspace.sort_key)))


def _graph_iso(e0: Subspace, e1: Subspace, e2: Subspace) -> FpMatrix:
    """The matrix whose graph in the split e0 + e1 is e2; needs mutual complements."""
    n = e0.dim
    minv = invert(vstack(e0.basis, e1.basis))
    cd = matmul(e2.basis, minv)
    c = cd.column_block(0, n)
    d = cd.column_block(n, 2 * n)
    return matmul(invert(c), d)


def regulus_through(e0: Subspace, e1: Subspace, e2: Subspace) -> Regulus:
    """The unique regulus containing three mutually complementary subspaces.

    e0 becomes the frame base, e1 the target, and the isomorphism is read off
    from e2, which is a graph over the split since it complements both.
    """
    for a, b in ((e0, e1), (e0, e2), (e1, e2)):
        if not is_distant(a, b):
            raise NotMutuallyDistant("inputs must be pairwise complementary")
    frame = Frame(e0, e1, _graph_iso(e0, e1, e2))
    reg = frame_regulus(frame)
    assert e2 in reg.members
    return reg


def line_meets(line: Subspace, sub: Subspace) -> bool:
    """True iff the two subspaces share a point."""
    stacked = line.basis.entries + sub.basis.entries
    return rref_rows(line.p, stacked, line.ambient)[1] < line.dim + sub.dim


def _lines_meeting_triple(a: Subspace, b: Subspace, c: Subspace) -> list[Subspace]:
    """All lines meeting a, b and c, for b, c complementary and a distant to both.

    Every such line hits a in a point, and through each point of a there is a
    unique line meeting b and c: join the two components of the point in the
    split b + c.
    """
    p, d = a.p, a.ambient
    minv = invert(vstack(b.basis, c.basis))
    half = b.dim
    out = []
    for v in a.point_vectors():
        coords = matmul(FpMatrix.from_rows(p, [v]), minv).entries[0]
        vb = from_coords(b, coords[:half])
        vc = from_coords(c, coords[half:])
        out.append(span(p, d, [vb, vc]))
    return out


def _canonical_members(members: Iterable[Subspace]) -> list[Subspace]:
    return sorted(set(members), key=Subspace.sort_key)


def _pairwise_distant(members: Sequence[Subspace]) -> bool:
    return all(is_distant(a, b) for a, b in itertools.combinations(members, 2))


def directrices(members: Iterable[Subspace]) -> tuple[Subspace, ...]:
    """All lines meeting every member of a distant clique of size >= 3."""
    ms = _canonical_members(members)
    if len(ms) < 3:
        raise TooFewMembers("need at least three members")
    if not _pairwise_distant(ms):
        raise NotDistantClique("members must be pairwise complementary")
    out = []
    for line in _lines_meeting_triple(ms[0], ms[1], ms[2]):
        if all(line_meets(line, m) for m in ms[3:]):
            out.append(line)
    return tuple(sorted(out, key=Subspace.sort_key))


def is_partial_regulus(members: Iterable[Subspace]) -> bool:
    """Distant clique of size >= 3 where lines meeting any three members meet all."""
    ms = _canonical_members(members)
    if len(ms) < 3 or not _pairwise_distant(ms):
        return False
    for a, b, c in itertools.combinations(ms, 3):
        for line in _lines_meeting_triple(a, b, c):
            if not all(line_meets(line, m) for m in ms):
                return False
    return True


def is_regulus(members: Iterable[Subspace]) -> bool:
    """Partial regulus that equals the closure of any three of its members."""
    ms = _canonical_members(members)
    if not is_partial_regulus(ms):
        return False
    closure = regulus_through(ms[0], ms[1], ms[2])
    return list(closure.members) == ms


def extension_candidates(index: GrassmannianIndex, handles: Sequence[int]) -> list[int]:
    """Brute-force maximality oracle: X outside S keeping both clique conditions."""
    out = []
    sset = set(handles)
    members = [index.elements[h] for h in handles]
    for x in range(len(index)):
        if x in sset:
            continue
        if all(index.distant(x, h) for h in handles):
            if is_partial_regulus(members + [index.elements[x]]):
                out.append(x)
    return out


def covered_points(reg: Regulus, line: Subspace) -> tuple[Subspace, ...]:
    """Points of a directrix lying on some member; one per member, all p + 1."""
    if line not in reg.directrices:
        raise NotADirectrix("line is not a directrix of this regulus")
    pts = []
    for m in reg.members:
        meet = intersect(line, m)
        if meet.dim == 1:
            pts.append(meet)
    return tuple(sorted(set(pts), key=Subspace.sort_key))


def is_regulus_via_distant(index: GrassmannianIndex, handles: Iterable[int]) -> bool:
    """Regulus test phrased in the distant graph only.

    Pairwise distant with >= 3 members; for any ordered triple (E0, E1, E2)
    of members, every W adjacent to E0 (adjacency reconstructed from the
    distant rows) and non-distant to E1 and E2 is non-distant to every
    member; and the set equals the closure of its first three members.
    """
    hs = sorted(set(handles))
    if len(hs) < 3:
        return False
    for i, a in enumerate(hs):
        for b in hs[i + 1:]:
            if not index.distant(a, b):
                return False
    mask = 0
    for h in hs:
        mask |= 1 << h
    dadj = index.derived_adjacency_rows
    dist = index.dist_rows
    full = index.universe
    for e0, e1, e2 in itertools.permutations(hs, 3):
        wmask = dadj[e0] & (full ^ dist[e1]) & (full ^ dist[e2])
        for w in iter_bits(wmask):
            if dist[w] & mask:
                return False
    closure = regulus_through(*(index.elements[h] for h in hs[:3]))
    return sorted(index.handle_of(m) for m in closure.members) == hs


@dataclass(frozen=True)
class SweepReport:
    """Result of an exhaustive hypothesis sweep; ok iff no violations."""

    name: str
    checked: int
    violations: tuple[dict, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def sweep_meet_points(index: GrassmannianIndex, max_witnesses: int = 5) -> SweepReport:
    """W adjacent to E0, E complementary to E0 but not to W => W meets E in a point."""
    checked = 0
    bad: list[dict] = []
    full = index.universe
    for e0 in range(len(index)):
        dist0 = index.dist_rows[e0]
        for w in iter_bits(index.adj_rows[e0]):
            emask = dist0 & (full ^ index.dist_rows[w])
            for e in iter_bits(emask):
                checked += 1
                if index.meet_dim(w, e) != 1:
                    if len(bad) < max_witnesses:
                        bad.append({"w": w, "e0": e0, "e": e,
                                    "meet_dim": index.meet_dim(w, e)})
                    else:
                        bad.append({})
    return SweepReport("meet-point", checked, tuple(bad))


def _proportional(p: int, r1: Sequence[int], r2: Sequence[int]) -> bool:
    """rank{r1, r2} <= 1 over GF(p)."""
    lead = next((i for i, x in enumerate(r1) if x), None)
    if lead is None:
        return True
    if not any(r2):
        return True
    from .gfcore import inverse_table

    f = (r2[lead] * inverse_table(p)[r1[lead]]) % p
    return all((y - f * x) % p == 0 for x, y in zip(r1, r2))


def sweep_meet_lines(index: GrassmannianIndex, max_witnesses: int = 5) -> SweepReport:
    """For mutually complementary E0, E1, E2 and W adjacent to E0 with W
    non-distant to E1 and E2: the line joining W's meeting points with E1 and
    E2 meets E0."""
    checked = 0
    bad: list[dict] = []
    full = index.universe
    point_cache: dict[tuple[int, int], tuple[int, ...] | None] = {}

    def meet_point(w: int, e: int):
        key = (w, e)
        if key not in point_cache:
            inter = intersect(index.elements[w], index.elements[e])
            point_cache[key] = inter.basis.entries[0] if inter.dim == 1 else None
        return point_cache[key]

    for e0 in range(len(index)):
        base = index.elements[e0]
        dist0 = index.dist_rows[e0]
        for w in iter_bits(index.adj_rows[e0]):
            emask = dist0 & (full ^ index.dist_rows[w])
            elist = list(iter_bits(emask))
            residues = {}
            for e in elist:
                v = meet_point(w, e)
                residues[e] = None if v is None else reduce_vector(base, v)
            for a in range(len(elist)):
                e1 = elist[a]
                for b in range(a + 1, len(elist)):
                    e2 = elist[b]
                    if not index.distant(e1, e2):
                        continue
                    checked += 1
                    r1, r2 = residues[e1], residues[e2]
                    if r1 is None or r2 is None or not _proportional(index.p, r1, r2):
                        if len(bad) < max_witnesses:
                            bad.append({"w": w, "e0": e0, "e1": e1, "e2": e2})
                        else:
                            bad.append({})
    return SweepReport("meet-line", checked, tuple(bad))


@dataclass(frozen=True)
class ClosureSweep:
    """Closure of every mutually complementary triple, grouped by member set."""

    signatures: tuple[tuple[int, ...], ...]  # sorted member-handle tuples
    triples: int
    triples_per_regulus: int
    consistent: bool  # every triple's closure contains it, hit counts all equal


def all_reguli(index: GrassmannianIndex) -> ClosureSweep:
    """Run regulus closure over every mutually complementary triple.

    Uniqueness of the regulus through a triple is equivalent to: each closure
    contains its generating triple, and each produced member set is generated
    by exactly C(p+1, 3) triples, with the totals matching.
    """
    p, n, d = index.p, index.n, index.ambient
    hmap = {e.basis.entries: h for h, e in enumerate(index.elements)}
    reps = list(projective_reps(p, 2))
    counts: dict[tuple[int, ...], int] = {}
    contains_ok = True
    triples = 0
    dist = index.dist_rows
    elements = index.elements
    for i in range(len(index)):
        di = dist[i]
        bi = elements[i].basis
        for j in iter_bits(di):
            if j <= i:
                continue
            bj = elements[j].basis
            minv = invert(vstack(bi, bj))
            minv_cols = tuple(zip(*minv.entries))
            both = di & dist[j]
            for k in iter_bits(both):
                if k <= j:
                    continue
                triples += 1
                bk = elements[k].basis.entries
                cd = [tuple(sum(x * y for x, y in zip(row, col)) % p for col in minv_cols)
                      for row in bk]
                c_rows = [row[:n] for row in cd]
                d_rows = [row[n:] for row in cd]
                aug = [cr + tuple(int(r == s) for s in range(n)) for r, cr in enumerate(c_rows)]
                red, _, _ = rref_rows(p, aug, 2 * n)
                cinv = [row[n:] for row in red]
                lam = [tuple(sum(x * y for x, y in zip(row, col)) % p
                             for col in zip(*d_rows)) for row in cinv]
                lam_bj = [tuple(sum(x * y for x, y in zip(row, col)) % p
                                for col in zip(*bj.entries)) for row in lam]
                handles = []
                for x, y in reps:
                    rows = [tuple((x * u + y * v) % p for u, v in zip(ru, rv))
                            for ru, rv in zip(bi.entries, lam_bj)]
                    red_rows, _, _ = rref_rows(p, rows, d)
                    handles.append(hmap[tuple(red_rows[:n])])
                sig = tuple(sorted(handles))
                counts[sig] = counts.get(sig, 0) + 1
                if contains_ok and not {i, j, k} <= set(sig):
                    contains_ok = False
    expected = math.comb(p + 1, 3)
    consistent = (contains_ok
                  and all(v == expected for v in counts.values())
                  and expected * len(counts) == triples)
    return ClosureSweep(tuple(sorted(counts)), triples, expected, consistent)


def sample_distant_cliques(index: GrassmannianIndex, rng: Random, count: int,
                           min_size: int = 3, max_size: int | None = None) -> list[tuple[int, ...]]:
    """Seeded random distant cliques, used as candidate sets for predicate checks."""
    if max_size is None:
        max_size = index.p + 2
    out = []
    n_handles = len(index)
    attempts = 0
    while len(out) < count and attempts < count * 50:
        attempts += 1
        size = rng.randint(min_size, max_size)
        start = rng.randrange(n_handles)
        clique = [start]
        cand = index.dist_rows[start]
        while len(clique) < size and cand:
            choices = list(iter_bits(cand))
            pick = choices[rng.randrange(len(choices))]
            clique.append(pick)
            cand &= index.dist_rows[pick]
        if len(clique) >= min_size:
            out.append(tuple(sorted(clique)))
    return out


def ruled_point_set(frame: Frame) -> frozenset[tuple[int, ...]]:
    """All vectors r*u + s*(u^iso): the cone swept by the directrices."""
    p = frame.base.p
    vectors = set()
    zero = (0,) * frame.base.ambient
    vectors.add(zero)
    for c in itertools.product(range(p), repeat=frame.base.dim):
        if not any(c):
            continue
        u = from_coords(frame.base, c)
        img = from_coords(frame.target,
                          matmul(FpMatrix.from_rows(p, [c]), frame.iso).entries[0])
        for r in range(p):
            for s in range(p):
                vectors.add(tuple((r * a + s * b) % p for a, b in zip(u, img)))
    return frozenset(vectors)
