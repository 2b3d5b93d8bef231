import itertools

import pytest
from hypothesis import given, settings, strategies as st

from grasslab.errors import AmbientMismatch, DimensionMismatch
from grasslab.gfcore import FpMatrix
from grasslab.subspace import (
    Subspace,
    annihilator,
    contains,
    enumerate_subspaces,
    format_subspaces,
    full_space,
    gaussian_binomial,
    intersect,
    parse_subspaces,
    projective_reps,
    span,
    sum_subspaces,
    zero_subspace,
)
from test_gfcore import combos


def sub(p, *lines):
    return Subspace.from_digits(p, list(lines))


def brute_force_count(p, d, k):
    """Count k-subspaces by spanning every k-set of vectors; independent oracle."""
    if k == 0:
        return 1
    vectors = list(itertools.product(range(p), repeat=d))
    seen = set()
    for tup in itertools.combinations(vectors, k):
        spanned = combos(p, tup, d)
        if len(spanned) == p ** k:
            seen.add(frozenset(spanned))
    return len(seen)


def test_span_coordinate_plane():
    s = span(2, 4, [(1, 0, 0, 0), (0, 1, 0, 0)])
    assert s.dim == 2 and s.basis.to_digits() == ["1000", "0100"]


def test_span_empty_is_zero():
    s = span(2, 4, [])
    assert s == zero_subspace(2, 4) and s.dim == 0


def test_span_dependent_rows():
    # 1100 + 0110 = 1010, so the span has 4 = 2^2 vectors: rank 2
    rows = [(1, 1, 0, 0), (0, 1, 1, 0), (1, 0, 1, 0)]
    assert len(combos(2, rows, 4)) == 4
    assert span(2, 4, rows).dim == 2


def test_span_length_mismatch():
    with pytest.raises(DimensionMismatch):
        span(2, 4, [(1, 0)])


def test_sum_examples():
    x = sub(2, "1000", "0100")
    assert sum_subspaces(x, x) == x
    assert sum_subspaces(x, sub(2, "0010", "0001")) == full_space(2, 4)
    grown = sum_subspaces(x, sub(2, "1000", "0010"))
    assert grown == sub(2, "1000", "0100", "0010") and grown.dim == 3


def test_intersect_examples():
    x = sub(2, "1000", "0100")
    assert intersect(x, x) == x
    assert intersect(x, sub(2, "0010", "0001")) == zero_subspace(2, 4)
    assert intersect(x, sub(2, "1000", "0010")) == sub(2, "1000")


def test_contains_examples():
    v = full_space(2, 4)
    assert contains(v, sub(2, "1000")) and contains(v, zero_subspace(2, 4))
    assert not contains(sub(2, "1000"), sub(2, "0100"))
    # 1100 = 1010 + 0110
    assert contains(sub(2, "1010", "0110"), sub(2, "1100"))


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        sum_subspaces(sub(2, "10"), sub(2, "1000"))
    with pytest.raises(AmbientMismatch):
        intersect(sub(2, "1000"), sub(3, "1000"))


def test_annihilator_examples():
    assert annihilator(zero_subspace(2, 4)) == full_space(2, 4)
    assert annihilator(sub(2, "1000", "0100")) == sub(2, "0010", "0001")
    # 1010 and 0101 are orthogonal to themselves and each other mod 2
    iso = sub(2, "1010", "0101")
    assert annihilator(iso) == iso


def test_annihilator_duality_exhaustive_gf2_dim4():
    all_subs = [s for k in range(5) for s in enumerate_subspaces(2, 4, k)]
    for s in all_subs:
        perp = annihilator(s)
        assert perp.dim == 4 - s.dim
        assert annihilator(perp) == s
    for a, b in itertools.combinations(all_subs, 2):
        if contains(a, b):
            assert contains(annihilator(b), annihilator(a))
        assert annihilator(sum_subspaces(a, b)) == intersect(annihilator(a), annihilator(b))
        assert annihilator(intersect(a, b)) == sum_subspaces(annihilator(a), annihilator(b))


def test_enumeration_counts_against_both_oracles():
    assert len(enumerate_subspaces(2, 4, 2)) == 35 == gaussian_binomial(4, 2, 2)
    assert brute_force_count(2, 4, 2) == 35
    assert len(enumerate_subspaces(3, 4, 2)) == 130 == gaussian_binomial(4, 2, 3)
    assert brute_force_count(3, 4, 2) == 130
    assert enumerate_subspaces(2, 4, 0) == (zero_subspace(2, 4),)


@pytest.mark.parametrize("p", [2, 3])
def test_enumeration_counts_formula_sweep(p):
    for d in range(1, 7):
        for k in range(d + 1):
            count = gaussian_binomial(d, k, p)
            if count > 40_000:
                continue
            assert len(enumerate_subspaces(p, d, k)) == count


def test_enumeration_is_sorted_and_unique():
    subs = enumerate_subspaces(2, 4, 2)
    keys = [s.sort_key() for s in subs]
    assert keys == sorted(keys)
    assert len(set(subs)) == len(subs)


def test_projective_reps_count():
    for p in (2, 3, 5):
        for k in range(1, 4):
            reps = list(projective_reps(p, k))
            assert len(reps) == (p ** k - 1) // (p - 1)
            assert len(set(reps)) == len(reps)


@st.composite
def random_subspaces(draw, d=4):
    p = draw(st.sampled_from((2, 3, 5)))
    k = draw(st.integers(0, d))
    rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=d, max_size=d),
                         min_size=k, max_size=k))
    return span(p, d, rows)


@given(random_subspaces())
def test_canonicity_under_rebasing(s):
    # spanning any invertible recombination of the basis gives the same value
    rows = list(s.basis.entries)
    recombined = list(rows)
    for i in range(len(rows)):
        for j in range(len(rows)):
            if i != j:
                recombined[i] = tuple((x + y) % s.p for x, y in zip(recombined[i], rows[j]))
    assert span(s.p, s.ambient, recombined + rows) == s


@given(random_subspaces(), random_subspaces())
@settings(max_examples=60)
def test_dimension_formula(a, b):
    if a.p != b.p:
        return
    assert sum_subspaces(a, b).dim + intersect(a, b).dim == a.dim + b.dim


def test_dimension_formula_exhaustive_gf2_dim4():
    all_subs = [s for k in range(5) for s in enumerate_subspaces(2, 4, k)]
    for a in all_subs:
        for b in all_subs:
            assert sum_subspaces(a, b).dim + intersect(a, b).dim == a.dim + b.dim
            assert contains(sum_subspaces(a, b), a)
            assert contains(a, intersect(a, b))


def test_coords_round_trip():
    s = sub(3, "1010", "0102")
    for v in s.point_vectors():
        c = s.coords(v)
        assert len(c) == s.dim
    with pytest.raises(ValueError):
        s.coords((1, 0, 0, 0))


def test_text_format_round_trip():
    subs = enumerate_subspaces(3, 4, 2)
    text = format_subspaces(3, 4, subs)
    p, ambient, back = parse_subspaces(text)
    assert (p, ambient) == (3, 4)
    assert tuple(back) == subs


def test_text_format_header_example():
    text = format_subspaces(2, 4, [sub(2, "1000", "0100")])
    assert text.splitlines()[0] == "2 4"
    assert "1000" in text and "0100" in text
