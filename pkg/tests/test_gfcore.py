import itertools

import pytest
from hypothesis import given, strategies as st

from grasslab.errors import DimensionMismatch, Singular, UnsupportedField
from grasslab.gfcore import (
    SUPPORTED_PRIMES,
    FpMatrix,
    inverse_table,
    invert,
    is_invertible,
    matmul,
    rank,
    right_kernel,
    rref,
)


def combos(p, rows, cols):
    """Every linear combination of the rows; independent row-space oracle."""
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        v = [0] * cols
        for c, r in zip(coeffs, rows):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, r)]
        out.add(tuple(v))
    return out


@st.composite
def fp_matrices(draw, max_rows=3, max_cols=4, square=False):
    p = draw(st.sampled_from(SUPPORTED_PRIMES))
    r = draw(st.integers(1, max_rows))
    c = r if square else draw(st.integers(1, max_cols))
    ent = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c),
                        min_size=r, max_size=r))
    return FpMatrix.from_rows(p, ent, c)


def test_rref_identity():
    m = FpMatrix.identity(2, 2)
    red, rk, piv = rref(m)
    assert red == m and rk == 2 and piv == (0, 1)


def test_rref_equal_rows_collapse():
    red, rk, _ = rref(FpMatrix.from_digits(2, ["11", "11"]), trim=True)
    assert red.to_digits() == ["11"] and rk == 1


def test_rref_hand_reduction():
    # by hand: r2 += r1 clears column 0 giving 0110, then r1 += r2 gives 1010
    red, rk, piv = rref(FpMatrix.from_digits(2, ["1100", "1010"]))
    assert red.to_digits() == ["1010", "0110"]
    assert rk == 2 and piv == (0, 1)


def test_invert_identity():
    m = FpMatrix.identity(3, 3)
    assert invert(m) == m


def test_invert_char2_shear_is_self_inverse():
    m = FpMatrix.from_digits(2, ["11", "01"])
    assert invert(m) == m


def test_invert_singular():
    with pytest.raises(Singular):
        invert(FpMatrix.from_rows(3, [[1, 1], [1, 1]]))


def test_invert_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        invert(FpMatrix.from_rows(2, [[1, 0, 1]]))


def test_matmul_identity():
    a = FpMatrix.from_rows(5, [[1, 2, 3], [4, 0, 2]])
    assert matmul(a, FpMatrix.identity(5, 3)) == a


def test_matmul_gf2_cancellation():
    a = FpMatrix.from_rows(2, [[1, 1]])
    b = FpMatrix.from_rows(2, [[1], [1]])
    assert matmul(a, b).entries == ((0,),)


def test_matmul_gf3_hand_product():
    # by hand: rows (1,2),(0,1) times columns: (1*1+2*1, 1*0+2*1) = (0,2) mod 3
    a = FpMatrix.from_rows(3, [[1, 2], [0, 1]])
    b = FpMatrix.from_rows(3, [[1, 0], [1, 1]])
    assert matmul(a, b).entries == ((0, 2), (1, 1))


def test_matmul_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        matmul(FpMatrix.identity(2, 2), FpMatrix.identity(2, 3))
    with pytest.raises(DimensionMismatch):
        matmul(FpMatrix.identity(2, 2), FpMatrix.identity(3, 2))


def test_unsupported_prime():
    with pytest.raises(UnsupportedField):
        FpMatrix.identity(11, 2)


def test_entries_must_be_reduced():
    with pytest.raises(ValueError):
        FpMatrix(2, 1, 1, ((2,),))


@given(fp_matrices())
def test_rref_idempotent(m):
    once = rref(m).matrix
    assert rref(once).matrix == once


@given(fp_matrices())
def test_rref_preserves_row_space(m):
    red, rk, _ = rref(m, trim=True)
    assert combos(m.p, m.entries, m.cols) == combos(m.p, red.entries, m.cols)
    assert len(combos(m.p, red.entries, m.cols)) == m.p ** rk


@given(fp_matrices(square=True))
def test_invert_round_trip(m):
    if not is_invertible(m):
        with pytest.raises(Singular):
            invert(m)
        return
    eye = FpMatrix.identity(m.p, m.rows)
    assert matmul(m, invert(m)) == eye
    assert matmul(invert(m), m) == eye


@given(fp_matrices())
def test_right_kernel_annihilates(m):
    ker = right_kernel(m)
    assert ker.rows == m.cols - rank(m)
    for row in ker.entries:
        image = matmul(m, FpMatrix.from_rows(m.p, [list(row)]).transpose())
        assert all(x == 0 for r in image.entries for x in r)


@pytest.mark.parametrize("p", SUPPORTED_PRIMES)
def test_field_axioms_exhaustive(p):
    inv = inverse_table(p)
    for a in range(p):
        assert (a + (p - a) % p) % p == 0
        if a:
            assert a * inv[a] % p == 1
        for b in range(p):
            assert (a + b) % p == (b + a) % p
            assert a * b % p == b * a % p
            for c in range(p):
                assert ((a + b) + c) % p == (a + (b + c)) % p
                assert (a * b) * c % p == a * (b * c) % p % p
                assert a * ((b + c) % p) % p == (a * b + a * c) % p
