"""Verification suites, deterministic reports, and the index cache.

Every suite is a list of named checks run against an indexed Grassmannian.
A fixed (suite, p, n, seed) produces a byte-identical report; timing data
is collected but only serialized on request, so report files stay stable
across runs.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Callable, Sequence

from . import __version__
from .errors import BadConfig, CorruptCache, ResourceLimit
from .gfcore import FpMatrix, invert, matmul, rref_rows, vstack
from .grassmann import (
    GrassmannianIndex,
    bfs_distances,
    bron_kerbosch_maximal_cliques,
    build_index,
    compute_relations,
    graph_metrics,
    induced_duality,
    induced_map,
    iter_bits,
    maximal_adjacency_cliques,
    pencils_from_cliques,
    pencils_from_flags,
    star,
    top,
)
from .reguli import (
    all_reguli,
    covered_points,
    directrices,
    extension_candidates,
    frame_regulus,
    is_partial_regulus,
    is_regulus,
    is_regulus_via_distant,
    line_meets,
    regulus_through,
    ruled_point_set,
    sample_distant_cliques,
    sweep_meet_lines,
    sweep_meet_points,
)
from .ringline import (
    Frame,
    GL2Element,
    act,
    all_invertible_matrices,
    chain_orbit,
    infinity,
    make_point,
    model_report,
    origin,
    pair_witness,
    point_of,
    random_gl2,
    random_invertible,
    ring_distant,
    standard_chain,
    to_grassmannian,
    to_linear_map,
    triple_witness,
    unit,
)
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

NAMED_SUITES = ("cliques", "pencils", "distadj", "metrics", "ringline",
                "reguli", "zreg-equivalence", "lemmas", "automorph")
ALL_SUITES = NAMED_SUITES + ("all",)


@dataclass
class SuiteConfig:
    """What to run; fixed seed implies a byte-identical report."""

    suite: str
    p: int | None = None
    n: int | None = None
    seed: int = 0
    sample: int = 100
    chain_sample: int = 10_000
    out: Path | None = None
    fmt: str = "json"
    cache_dir: Path | None = None
    timings: bool = False


@dataclass
class CheckRecord:
    name: str
    target: str
    status: str  # "pass" | "fail"
    counts: dict[str, int]
    witness: dict | None
    elapsed: float


@dataclass
class Report:
    suite: str
    seed: int
    sample: int
    chain_sample: int
    version: str
    checks: list[CheckRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    def to_json(self, timings: bool = False) -> str:
        checks = []
        for c in self.checks:
            rec = {"name": c.name, "target": c.target, "status": c.status,
                   "counts": c.counts, "witness": c.witness}
            if timings:
                rec["elapsed_ms"] = round(c.elapsed * 1000, 3)
            checks.append(rec)
        passed = sum(c.status == "pass" for c in self.checks)
        doc = {
            "artifact": "grasslab",
            "version": self.version,
            "suite": self.suite,
            "seed": self.seed,
            "sample": self.sample,
            "chain_sample": self.chain_sample,
            "checks": checks,
            "summary": {"total": len(self.checks), "passed": passed,
                        "failed": len(self.checks) - passed},
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_text(self, timings: bool = False) -> str:
        lines = [f"grasslab {self.version} suite={self.suite} seed={self.seed} "
                 f"sample={self.sample} chain_sample={self.chain_sample}"]
        width = max((len(c.name) for c in self.checks), default=0)
        for c in self.checks:
            counts = " ".join(f"{k}={v}" for k, v in c.counts.items())
            stamp = f"  [{c.elapsed * 1000:.1f} ms]" if timings else ""
            lines.append(f"{c.status.upper():4}  {c.target:10}  {c.name:{width}}  {counts}{stamp}")
            if c.witness is not None:
                lines.append(f"      witness: {json.dumps(c.witness)}")
        passed = sum(c.status == "pass" for c in self.checks)
        lines.append(f"{len(self.checks)} checks: {passed} passed, "
                     f"{len(self.checks) - passed} failed")
        return "\n".join(lines) + "\n"


def _check(records: list[CheckRecord], name: str, target: str,
           fn: Callable[[], tuple[bool, dict[str, int], dict | None]]) -> None:
    t0 = time.perf_counter()
    ok, counts, witness = fn()
    records.append(CheckRecord(name, target, "pass" if ok else "fail",
                               counts, None if ok else witness, time.perf_counter() - t0))


def set_equality_witness(left: set, right: set) -> dict | None:
    """Witness for a failed set comparison: one element per side difference."""
    only_left = sorted(left - right)
    only_right = sorted(right - left)
    if not only_left and not only_right:
        return None
    return {"missing_from_right": [list(x) for x in only_left[:3]],
            "missing_from_left": [list(x) for x in only_right[:3]]}


def _target(index: GrassmannianIndex) -> str:
    return f"p={index.p},n={index.n}"


def _star_size(p: int, n: int) -> int:
    return (p ** (n + 1) - 1) // (p - 1)


# ---------------------------------------------------------------- suites


def suite_cliques(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n

    def element_count():
        expected = gaussian_binomial(2 * n, n, p)
        return len(index) == expected, {"elements": len(index), "expected": expected}, \
            {"kind": "count-mismatch"}

    _check(rec, "element_count", tgt, element_count)

    labels = maximal_adjacency_cliques(index)
    stars = [c for c in labels if c.kind == "star"]
    tops = [c for c in labels if c.kind == "top"]

    def star_top_counts():
        want_stars = gaussian_binomial(2 * n, n - 1, p)
        want_tops = gaussian_binomial(2 * n, n + 1, p)
        size = _star_size(p, n)
        ok = (len(stars) == want_stars and len(tops) == want_tops
              and all(len(c.members) == size for c in labels))
        return ok, {"stars": len(stars), "tops": len(tops), "size": size}, \
            {"kind": "clique-census"}

    _check(rec, "star_top_counts", tgt, star_top_counts)

    def structure():
        checked = 0
        for c in labels:
            for a, b in itertools.combinations(c.members, 2):
                checked += 1
                if not index.adjacent(a, b):
                    return False, {"checked": checked}, {"kind": "not-adjacent",
                                                         "clique": c.kind, "pair": [a, b]}
                ea, eb = index.elements[a], index.elements[b]
                if c.kind == "star" and intersect(ea, eb) != c.carrier:
                    return False, {"checked": checked}, {"kind": "star-meet", "pair": [a, b]}
                if c.kind == "top" and sum_subspaces(ea, eb) != c.carrier:
                    return False, {"checked": checked}, {"kind": "top-join", "pair": [a, b]}
        return True, {"checked": checked}, None

    _check(rec, "stars_tops_structure", tgt, structure)

    def oracle():
        expected = {c.mask() for c in labels}
        found = set(bron_kerbosch_maximal_cliques(index.adj_rows))
        witness = set_equality_witness(
            {tuple(iter_bits(m)) for m in expected},
            {tuple(iter_bits(m)) for m in found})
        return found == expected, {"oracle_cliques": len(found),
                                   "stars_and_tops": len(expected)}, \
            {"kind": "oracle-mismatch", **(witness or {})}

    _check(rec, "maximal_cliques_match_oracle", tgt, oracle)

    def disjoint_kinds():
        smasks = {c.mask() for c in stars}
        tmasks = {c.mask() for c in tops}
        return not smasks & tmasks, {"stars": len(smasks), "tops": len(tmasks)}, \
            {"kind": "star-equals-top"}

    _check(rec, "no_star_is_a_top", tgt, disjoint_kinds)

    def triples_covered():
        masks = [c.mask() for c in labels]
        checked = 0
        for i in range(len(index)):
            adj_i = index.adj_rows[i]
            for j in iter_bits(adj_i):
                if j <= i:
                    continue
                common = adj_i & index.adj_rows[j]
                for k in iter_bits(common):
                    if k <= j:
                        continue
                    checked += 1
                    tm = (1 << i) | (1 << j) | (1 << k)
                    if not any(m & tm == tm for m in masks):
                        return False, {"triples": checked}, \
                            {"kind": "uncovered-triple", "triple": [i, j, k]}
        return True, {"triples": checked}, None

    _check(rec, "adjacent_triples_covered", tgt, triples_covered)
    return rec


def suite_pencils(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    flags = pencils_from_flags(index)

    def count():
        expected = gaussian_binomial(2 * n, n - 1, p) * gaussian_binomial(n + 1, 2, p)
        return len(flags) == expected, {"pencils": len(flags), "expected": expected}, \
            {"kind": "pencil-count"}

    _check(rec, "pencil_count_matches_incidences", tgt, count)

    def structure():
        for pc in flags:
            if len(pc.members) != p + 1:
                return False, {"pencils": len(flags)}, \
                    {"kind": "pencil-size", "members": list(pc.members)}
            for a, b in itertools.combinations(pc.members, 2):
                ea, eb = index.elements[a], index.elements[b]
                if not index.adjacent(a, b) or intersect(ea, eb) != pc.centre \
                        or sum_subspaces(ea, eb) != pc.carrier:
                    return False, {"pencils": len(flags)}, \
                        {"kind": "pencil-structure", "pair": [a, b]}
            smask = star(index, pc.centre).mask()
            tmask = top(index, pc.carrier).mask()
            if smask & tmask != pc_mask(pc):
                return False, {"pencils": len(flags)}, \
                    {"kind": "pencil-not-star-meet-top", "members": list(pc.members)}
        return True, {"pencils": len(flags), "size": p + 1}, None

    def pc_mask(pc):
        m = 0
        for h in pc.members:
            m |= 1 << h
        return m

    _check(rec, "pencil_structure", tgt, structure)

    def equality():
        via_cliques = pencils_from_cliques(index)
        left = {(pc.centre, pc.carrier, pc.members) for pc in flags}
        right = {(pc.centre, pc.carrier, pc.members) for pc in via_cliques}
        witness = set_equality_witness({m for _, _, m in left}, {m for _, _, m in right})
        return left == right, {"via_flags": len(left), "via_cliques": len(right)}, \
            {"kind": "pencil-sets-differ", **(witness or {})}

    _check(rec, "clique_intersections_equal_flag_pencils", tgt, equality)

    def same_kind():
        labels = maximal_adjacency_cliques(index)
        checked = 0
        for kind in ("star", "top"):
            group = [c.mask() for c in labels if c.kind == kind]
            for a, b in itertools.combinations(group, 2):
                checked += 1
                if (a & b).bit_count() > 1:
                    return False, {"checked": checked}, \
                        {"kind": f"{kind}-pair-with-large-meet"}
        return True, {"checked": checked}, None

    _check(rec, "same_kind_intersections_trivial", tgt, same_kind)
    return rec


def suite_distadj(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)

    def agreement():
        derived = index.derived_adjacency_rows
        pairs = len(index) * (len(index) - 1) // 2
        bad = [(i, j) for i in range(len(index)) for j in range(i + 1, len(index))
               if (derived[i] >> j & 1) != (index.adj_rows[i] >> j & 1)]
        return not bad, {"pairs": pairs, "disagreements": len(bad)}, \
            {"kind": "derived-adjacency", "pair": list(bad[0]) if bad else None}

    _check(rec, "adjacency_from_distant_agrees", tgt, agreement)
    return rec


def suite_metrics(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    count = len(index)

    def adjacency_metrics():
        ecc = []
        mismatch = None
        for src in range(count):
            dist = bfs_distances(index.adj_rows, src, count)
            if min(dist) < 0:
                return False, {"elements": count}, {"kind": "disconnected", "source": src}
            ecc.append(max(dist))
            at_n = 0
            for h, dv in enumerate(dist):
                if dv == n:
                    at_n |= 1 << h
            if at_n != index.dist_rows[src] and mismatch is None:
                mismatch = src
        diameter = max(ecc)
        ok = diameter == n and mismatch is None
        return ok, {"diameter": diameter, "expected": n,
                    "distance_n_mismatches": 0 if mismatch is None else 1}, \
            {"kind": "grassmann-metrics", "source": mismatch}

    _check(rec, "grassmann_connected_diameter_n_and_distance_rule", tgt, adjacency_metrics)

    def distant_metrics():
        m = graph_metrics(index, "distant")
        expected = 2 if n >= 2 else 1
        ok = m.connected and m.diameter == expected
        return ok, {"diameter": m.diameter, "expected": expected}, \
            {"kind": "distant-metrics"}

    _check(rec, "distant_connected_diameter_2", tgt, distant_metrics)

    def degrees():
        adj_deg = ((p ** n - 1) // (p - 1)) * (_star_size(p, n) - 1)
        dist_deg = p ** (n * n)
        for i in range(count):
            if index.adj_rows[i].bit_count() != adj_deg:
                return False, {"expected_adjacent": adj_deg}, \
                    {"kind": "adjacency-degree", "handle": i}
            if index.dist_rows[i].bit_count() != dist_deg:
                return False, {"expected_distant": dist_deg}, \
                    {"kind": "distant-degree", "handle": i}
        return True, {"adjacent_degree": adj_deg, "distant_degree": dist_deg}, None

    _check(rec, "degree_formulas", tgt, degrees)

    def definitions_agree():
        if count <= 200:
            pairs = [(i, j) for i in range(count) for j in range(i + 1, count)]
        else:
            pairs = [(rng.randrange(count), rng.randrange(count))
                     for _ in range(cfg.sample * 100)]
            pairs = [(i, j) for i, j in pairs if i != j]
        checked = 0
        for i, j in pairs:
            checked += 1
            stacked = index.elements[i].basis.entries + index.elements[j].basis.entries
            join_dim = rref_rows(p, stacked, 2 * n)[1]
            upper = join_dim - n == 1  # both quotients over the join side
            lower = n - index.meet_dim(i, j) == 1
            if upper != lower:
                return False, {"checked": checked}, \
                    {"kind": "adjacency-definitions", "pair": [i, j]}
        return True, {"checked": checked}, None

    _check(rec, "adjacency_definitions_agree", tgt, definitions_agree)
    return rec


def suite_ringline(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    count = len(index)

    def model():
        rep = model_report(index)
        return rep.ok, {"ring_points": rep.ring_points, "grassmann_points": rep.grassmann_points,
                        "distant_pairs": rep.distant_pairs_ring}, \
            {"kind": "model", "injective": rep.injective, "surjective": rep.surjective,
             "distant_agrees": rep.distant_agrees}

    _check(rec, "model_bijection_and_distance", tgt, model)

    psis = [random_gl2(rng, p, n) for _ in range(cfg.sample)]

    def action_law():
        pts = [point_of(e) for e in index.elements]
        checked = 0
        for _ in range(min(cfg.sample, 50)):
            a = psis[rng.randrange(len(psis))]
            b = psis[rng.randrange(len(psis))]
            combined = a @ b
            for pt in pts if count <= 60 else [pts[rng.randrange(count)] for _ in range(10)]:
                checked += 1
                if act(combined, pt) != act(b, act(a, pt)):
                    return False, {"checked": checked}, {"kind": "action-law"}
        return True, {"checked": checked}, None

    _check(rec, "group_action_composition", tgt, action_law)

    def equivariance():
        from .ringline import equivariance_violations

        checked, bad = equivariance_violations(index, psis)
        return bad == 0, {"checked": checked, "violations": bad}, \
            {"kind": "equivariance"}

    _check(rec, "action_equivariance", tgt, equivariance)

    def chain():
        ch = sorted(standard_chain(p, n), key=lambda pt: pt.block.entries)
        images = {index.handle_of(to_grassmannian(pt)) for pt in ch}
        family = frame_regulus(Frame.standard(p, n))
        expected = {index.handle_of(m) for m in family.members}
        ok = (len(ch) == p + 1 and images == expected
              and all(ring_distant(a, b) for a, b in itertools.combinations(ch, 2)))
        return ok, {"points": len(ch)}, {"kind": "standard-chain",
                                         "images": sorted(images)}

    _check(rec, "standard_chain_matches_scalar_family", tgt, chain)

    def pair_trans():
        pts = [point_of(e) for e in index.elements]
        if count <= 60:
            pairs = [(i, j) for i in range(count) for j in iter_bits(index.dist_rows[i])]
        else:
            pairs = []
            while len(pairs) < cfg.sample * 5:
                i = rng.randrange(count)
                row = index.dist_rows[i]
                if row:
                    js = list(iter_bits(row))
                    pairs.append((i, js[rng.randrange(len(js))]))
        for i, j in pairs:
            w = pair_witness(pts[i], pts[j])
            if act(w, origin(p, n)) != pts[i] or act(w, infinity(p, n)) != pts[j]:
                return False, {"pairs": len(pairs)}, \
                    {"kind": "pair-witness", "pair": [i, j]}
        return True, {"pairs": len(pairs)}, None

    _check(rec, "pair_transitivity_witnesses", tgt, pair_trans)

    def triple_trans():
        pts = [point_of(e) for e in index.elements]
        triples = []
        if count <= 60:
            for i in range(count):
                di = index.dist_rows[i]
                for j in iter_bits(di):
                    if j <= i:
                        continue
                    for k in iter_bits(di & index.dist_rows[j]):
                        if k > j:
                            triples.append((i, j, k))
        else:
            while len(triples) < cfg.sample * 5:
                i = rng.randrange(count)
                js = list(iter_bits(index.dist_rows[i]))
                if not js:
                    continue
                j = js[rng.randrange(len(js))]
                ks = list(iter_bits(index.dist_rows[i] & index.dist_rows[j]))
                if not ks:
                    continue
                triples.append((i, j, ks[rng.randrange(len(ks))]))
        for i, j, k in triples:
            w = triple_witness(pts[i], pts[j], pts[k])
            if (act(w, origin(p, n)) != pts[i] or act(w, infinity(p, n)) != pts[j]
                    or act(w, unit(p, n)) != pts[k]):
                return False, {"triples": len(triples)}, \
                    {"kind": "triple-witness", "triple": [i, j, k]}
        return True, {"triples": len(triples)}, None

    _check(rec, "triple_transitivity_witnesses", tgt, triple_trans)

    def left_invariance():
        if p == 2 and n == 2:
            gs = all_invertible_matrices(p, n)
        else:
            gs = [random_invertible(rng, p, n) for _ in range(10)]
        pts = [point_of(e) for e in index.elements]
        checked = 0
        for g in gs:
            for pt in pts:
                checked += 1
                moved = make_point(matmul(g, pt.alpha), matmul(g, pt.beta))
                if moved != pt:
                    return False, {"checked": checked}, \
                        {"kind": "left-invariance"}
        return True, {"checked": checked}, None

    _check(rec, "canonical_form_left_invariant", tgt, left_invariance)
    return rec


def suite_reguli(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    frame = Frame.standard(p, n)
    family = frame_regulus(frame)

    def standard_family():
        members = family.members
        ok = (len(members) == p + 1
              and all(m.dim == n and m.ambient == 2 * n for m in members)
              and is_partial_regulus(members) and is_regulus(members)
              and len(family.directrices) == (p ** n - 1) // (p - 1))
        return ok, {"members": len(members), "directrices": len(family.directrices)}, \
            {"kind": "standard-family"}

    _check(rec, "standard_family_is_regulus", tgt, standard_family)

    def transversal():
        gen = directrices(family.members)
        if set(gen) != set(family.directrices):
            return False, {"directrices": len(gen)}, {"kind": "directrix-sets-differ"}
        for line in gen:
            hits = covered_points(family, line)
            if len(hits) != p + 1:
                return False, {"directrices": len(gen)}, \
                    {"kind": "coverage", "line": line.basis.to_digits()}
            for m in family.members:
                if intersect(line, m).dim != 1:
                    return False, {"directrices": len(gen)}, \
                        {"kind": "not-one-point", "line": line.basis.to_digits()}
        return True, {"directrices": len(gen), "covered_per_line": p + 1}, None

    _check(rec, "directrices_transversal_bijection", tgt, transversal)

    def cone_lines():
        cone = ruled_point_set(frame)
        first_kind = set(family.directrices)
        members = family.members
        inside = 0
        for line in enumerate_subspaces(p, 2 * n, 2):
            vecs = line.point_vectors()
            if not all(v in cone for v in vecs):
                continue
            inside += 1
            if line in first_kind:
                continue
            if not any(contains(m, line) for m in members):
                return False, {"lines_in_cone": inside}, \
                    {"kind": "unclassified-line", "line": line.basis.to_digits()}
        return True, {"lines_in_cone": inside}, None

    _check(rec, "cone_lines_classified", tgt, cone_lines)

    def images_are_reguli():
        for _ in range(min(cfg.sample, 25)):
            g = random_invertible(rng, p, 2 * n)
            imgs = [span(p, 2 * n, matmul(m.basis, g).entries) for m in family.members]
            if not is_regulus(imgs):
                return False, {}, {"kind": "image-not-regulus"}
        return True, {"maps": min(cfg.sample, 25)}, None

    _check(rec, "regulus_orbit_under_linear_maps", tgt, images_are_reguli)

    def permutation_invariance():
        trials = 0
        while trials < 20:
            i = rng.randrange(len(index))
            js = list(iter_bits(index.dist_rows[i]))
            if not js:
                continue
            j = js[rng.randrange(len(js))]
            ks = list(iter_bits(index.dist_rows[i] & index.dist_rows[j]))
            if not ks:
                continue
            k = ks[rng.randrange(len(ks))]
            trials += 1
            trio = [index.elements[i], index.elements[j], index.elements[k]]
            base = regulus_through(*trio).members
            for order in itertools.permutations(trio):
                if regulus_through(*order).members != base:
                    return False, {"trials": trials}, \
                        {"kind": "order-dependent", "triple": [i, j, k]}
        return True, {"trials": trials}, None

    _check(rec, "closure_permutation_invariant", tgt, permutation_invariance)
    return rec


def suite_zreg(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    sweep = all_reguli(index)
    signatures = set(sweep.signatures)

    def closure():
        return sweep.consistent, {"reguli": len(sweep.signatures),
                                  "triples": sweep.triples,
                                  "triples_per_regulus": sweep.triples_per_regulus}, \
            {"kind": "closure-sweep"}

    _check(rec, "closure_sweep_unique_regulus_per_triple", tgt, closure)

    def chains():
        exhaustive = p == 2 and n == 2
        if exhaustive:
            psis = [GL2Element.from_matrix(m) for m in all_invertible_matrices(p, 2 * n)]
        else:
            psis = [random_gl2(rng, p, n) for _ in range(cfg.chain_sample)]
        orbit = chain_orbit(p, n, psis)
        images = {tuple(sorted(index.handle_of(to_grassmannian(pt)) for pt in ch))
                  for ch in orbit}
        if exhaustive:
            ok = images == signatures
            witness = set_equality_witness(images, signatures)
        else:
            ok = images <= signatures
            witness = set_equality_witness(images & signatures, images)
        return ok, {"chains": len(images), "reguli": len(signatures),
                    "group_elements": len(psis), "exhaustive": int(exhaustive)}, \
            {"kind": "chain-images", **(witness or {})}

    _check(rec, "chain_images_match_reguli", tgt, chains)

    def characterization():
        if len(signatures) <= 1000:
            reg_candidates = sorted(signatures)
        else:
            sigs = sorted(signatures)
            reg_candidates = [sigs[rng.randrange(len(sigs))] for _ in range(cfg.sample * 2)]
        clique_candidates = sample_distant_cliques(index, rng, cfg.sample * 10)
        checked = 0
        non_reguli = 0
        passing = set()
        for cand in itertools.chain(reg_candidates, clique_candidates):
            checked += 1
            members = [index.elements[h] for h in cand]
            direct = is_regulus(members)
            via = is_regulus_via_distant(index, cand)
            if direct != via:
                return False, {"checked": checked}, \
                    {"kind": "verdict-mismatch", "candidate": list(cand),
                     "is_regulus": direct, "via_distant": via}
            non_reguli += not direct
            if via:
                passing.add(tuple(sorted(set(cand))))
        ok = passing <= signatures and set(reg_candidates) <= passing
        return ok, {"checked": checked, "non_reguli_candidates": non_reguli,
                    "passing": len(passing)}, \
            {"kind": "characterization-closure"}

    _check(rec, "distant_characterization_agrees", tgt, characterization)

    if p == 2 and n == 2:
        def extension_oracle():
            for sig in sorted(signatures):
                if extension_candidates(index, sig):
                    return False, {"reguli": len(signatures)}, \
                        {"kind": "extendable-regulus", "members": list(sig)}
            return True, {"reguli": len(signatures)}, None

        _check(rec, "maximality_matches_extension_oracle", tgt, extension_oracle)
    return rec


def suite_lemmas(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)

    def points():
        rep = sweep_meet_points(index)
        return rep.ok, {"checked": rep.checked, "violations": len(rep.violations)}, \
            {"kind": "meet-point", "first": rep.violations[0] if rep.violations else None}

    _check(rec, "meet_point_sweep", tgt, points)

    def lines():
        rep = sweep_meet_lines(index)
        return rep.ok, {"checked": rep.checked, "violations": len(rep.violations)}, \
            {"kind": "meet-line", "first": rep.violations[0] if rep.violations else None}

    _check(rec, "meet_line_sweep", tgt, lines)
    return rec


def suite_automorph(index: GrassmannianIndex, cfg: SuiteConfig, rng: Random) -> list[CheckRecord]:
    rec: list[CheckRecord] = []
    tgt = _target(index)
    p, n = index.p, index.n
    count = len(index)

    def permuted_rows_equal(rows: Sequence[int], perm: Sequence[int]) -> bool:
        for i in range(count):
            moved = 0
            for j in iter_bits(rows[i]):
                moved |= 1 << perm[j]
            if moved != rows[perm[i]]:
                return False
        return True

    centres = enumerate_subspaces(p, 2 * n, n - 1)
    star_masks = {c: star(index, c).mask() for c in centres}
    carriers = enumerate_subspaces(p, 2 * n, n + 1)
    top_masks = {c: top(index, c).mask() for c in carriers}

    def linear_maps():
        for trial in range(cfg.sample):
            g = random_invertible(rng, p, 2 * n)
            perm = induced_map(index, g)
            if not permuted_rows_equal(index.adj_rows, perm) \
                    or not permuted_rows_equal(index.dist_rows, perm):
                return False, {"maps": trial + 1}, \
                    {"kind": "relation-not-preserved", "map": g.to_digits()}
            for centre, mask in star_masks.items():
                image_centre = span(p, 2 * n, matmul(centre.basis, g).entries)
                moved = 0
                for h in iter_bits(mask):
                    moved |= 1 << perm[h]
                if moved != star_masks[image_centre]:
                    return False, {"maps": trial + 1}, \
                        {"kind": "star-not-star", "centre": centre.basis.to_digits()}
        return True, {"maps": cfg.sample, "stars": len(star_masks)}, None

    _check(rec, "linear_maps_preserve_relations_and_stars", tgt, linear_maps)

    def duality():
        perm = induced_duality(index)
        if not permuted_rows_equal(index.adj_rows, perm) \
                or not permuted_rows_equal(index.dist_rows, perm):
            return False, {}, {"kind": "duality-relations"}
        swapped = 0
        for centre, mask in star_masks.items():
            moved = 0
            for h in iter_bits(mask):
                moved |= 1 << perm[h]
            if moved != top_masks[annihilator(centre)]:
                return False, {"stars": len(star_masks)}, \
                    {"kind": "star-not-top", "centre": centre.basis.to_digits()}
            swapped += 1
        for carrier, mask in top_masks.items():
            moved = 0
            for h in iter_bits(mask):
                moved |= 1 << perm[h]
            if moved != star_masks[annihilator(carrier)]:
                return False, {"tops": len(top_masks)}, \
                    {"kind": "top-not-star", "carrier": carrier.basis.to_digits()}
        return True, {"stars_swapped": swapped, "tops_swapped": len(top_masks)}, None

    _check(rec, "duality_preserves_relations_and_swaps_kinds", tgt, duality)
    return rec


SUITE_FUNCS: dict[str, Callable] = {
    "cliques": suite_cliques,
    "pencils": suite_pencils,
    "distadj": suite_distadj,
    "metrics": suite_metrics,
    "ringline": suite_ringline,
    "reguli": suite_reguli,
    "zreg-equivalence": suite_zreg,
    "lemmas": suite_lemmas,
    "automorph": suite_automorph,
}

# Default plan for "all": both small targets in full (chain orbit sampled on
# the larger one by chain_sample), the big target metrics-only.
ALL_PLAN = (
    (2, 2, NAMED_SUITES),
    (3, 2, NAMED_SUITES),
    (2, 3, ("metrics",)),
)


def run_suite(cfg: SuiteConfig) -> Report:
    """Execute a named suite (or the full plan) and assemble the report."""
    if cfg.suite not in ALL_SUITES:
        raise BadConfig(f"unknown suite {cfg.suite!r}; choose from {ALL_SUITES}")
    if cfg.fmt not in ("json", "text"):
        raise BadConfig(f"unknown format {cfg.fmt!r}")
    rng = Random(cfg.seed)
    if cfg.suite == "all":
        plan = ALL_PLAN
    else:
        plan = ((cfg.p if cfg.p is not None else 2,
                 cfg.n if cfg.n is not None else 2, (cfg.suite,)),)
    report = Report(cfg.suite, cfg.seed, cfg.sample, cfg.chain_sample, __version__)
    cache: dict[tuple[int, int], GrassmannianIndex] = {}
    for p, n, names in plan:
        if (p, n) not in cache:
            cache[(p, n)] = _obtain_index(p, n, cfg.cache_dir)
        index = cache[(p, n)]
        for name in names:
            report.checks.extend(SUITE_FUNCS[name](index, cfg, rng))
    return report


# ---------------------------------------------------------------- cache


def cache_path(cache_dir: Path, p: int, n: int) -> Path:
    return Path(cache_dir) / f"grassmannian_p{p}_n{n}.txt"


def _relation_digest(rows: Sequence[int], count: int) -> str:
    width = (count + 7) // 8
    payload = b"".join(r.to_bytes(width, "little") for r in rows)
    return hashlib.sha256(payload).hexdigest()


def write_index_cache(index: GrassmannianIndex, path: Path) -> None:
    """Header 'p n count', relation checksums, then the canonical subspaces."""
    lines = [f"{index.p} {index.n} {len(index)}"]
    lines.append(f"adjacency {_relation_digest(index.adj_rows, len(index))}")
    lines.append(f"distant {_relation_digest(index.dist_rows, len(index))}")
    for e in index.elements:
        lines.append("")
        lines.extend(e.basis.to_digits())
    Path(path).write_text("\n".join(lines) + "\n")


def load_index_cache(path: Path) -> GrassmannianIndex:
    """Rebuild an index from a cache file; relations are recomputed and the
    stored checksums must match, otherwise the file is rejected."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CorruptCache(f"cannot read cache: {exc}") from None
    lines = text.splitlines()
    if len(lines) < 3:
        raise CorruptCache("truncated cache file")
    head = lines[0].split()
    if len(head) != 3:
        raise CorruptCache(f"bad header {lines[0]!r}")
    try:
        p, n, count = (int(x) for x in head)
    except ValueError:
        raise CorruptCache(f"bad header {lines[0]!r}") from None
    sums = {}
    for line in lines[1:3]:
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("adjacency", "distant"):
            raise CorruptCache(f"bad checksum line {line!r}")
        sums[parts[0]] = parts[1]
    if set(sums) != {"adjacency", "distant"}:
        raise CorruptCache("missing relation checksums")
    elements: list[Subspace] = []
    block: list[str] = []
    for raw in lines[3:] + [""]:
        stripped = raw.strip()
        if stripped:
            block.append(stripped)
        elif block:
            try:
                rows = [[int(ch) for ch in b] for b in block]
                elements.append(Subspace(p, 2 * n, FpMatrix.from_rows(p, rows, 2 * n)))
            except Exception as exc:
                raise CorruptCache(f"bad subspace block: {exc}") from None
            block = []
    if len(elements) != count:
        raise CorruptCache(f"expected {count} subspaces, found {len(elements)}")
    if len(set(elements)) != count:
        raise CorruptCache("duplicate subspaces in cache")
    if any(e.dim != n for e in elements):
        raise CorruptCache("subspace of wrong dimension in cache")
    adj_rows, dist_rows, meet = compute_relations(elements, p, n)
    if _relation_digest(adj_rows, count) != sums["adjacency"] \
            or _relation_digest(dist_rows, count) != sums["distant"]:
        raise CorruptCache("relation checksum mismatch")
    return GrassmannianIndex(p, n, elements, adj_rows, dist_rows, meet)


def _obtain_index(p: int, n: int, cache_dir: Path | None) -> GrassmannianIndex:
    if cache_dir is None:
        return build_index(p, n)
    path = cache_path(cache_dir, p, n)
    if path.exists():
        return load_index_cache(path)
    index = build_index(p, n)
    Path(cache_dir).mkdir(parents=True, exist_ok=True)
    write_index_cache(index, path)
    return index
