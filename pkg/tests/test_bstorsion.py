from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from foxkit.bstorsion import (
    det_int,
    diagonal,
    mat_mul_int,
    relation_matrix,
    smith_normal_form,
    torsion_report,
    truncated_generators,
)
from foxkit.errors import InputError


def test_index_sets():
    j = truncated_generators(2, 1)
    assert j.indices == (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2))
    assert len(truncated_generators(2, 2)) == 8
    assert len(truncated_generators(3, 1)) == 9
    with pytest.raises(InputError):
        truncated_generators(1, 1)
    with pytest.raises(InputError):
        truncated_generators(2, 0)


@pytest.mark.parametrize("m,n", [(2, 1), (2, 3), (3, 2)])
def test_truncation_is_monotone(m, n):
    small, big = relation_matrix(m, n), relation_matrix(m, n + 1)
    assert set(small.basis.indices) <= set(big.basis.indices)
    embed = [big.basis.position(z) for z in small.basis.indices]
    big_rows = set(big.rows)
    for row in small.rows:
        lifted = [0] * big.ncols
        for i, c in enumerate(row):
            lifted[embed[i]] = c
        assert tuple(lifted) in big_rows


def test_hand_computed_matrix():
    assert relation_matrix(2, 1).rows == ((0, 1, 0, -1), (-1, 0, -2, 0), (0, -2, 1, -2))


def test_m3_doubling_pattern():
    rel = relation_matrix(3, 1)
    doubling = rel.rows[rel.symmetry_rows:]
    assert len(doubling) == 3
    # z = 1: a_1 - 3 (a_{1/3} + a_{4/3} + a_{7/3})
    row = doubling[1]
    assert sorted(c for c in row if c) == [-3, -3, -3, 1]


def test_snf_examples():
    assert smith_normal_form([[2, 0], [0, 3]]).divisors == (1, 6)
    assert smith_normal_form([[1 if i == j else 0 for j in range(4)] for i in range(4)]).divisors == (1, 1, 1, 1)
    assert smith_normal_form([[0]]).divisors == (0,)


matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@given(matrices)
def test_snf_against_sympy(a):
    s = smith_normal_form(a, transforms=True)
    rows, cols = len(a), len(a[0])
    assert mat_mul_int(mat_mul_int(s.u, a), s.v) == diagonal(s.divisors, rows, cols)
    assert det_int(s.u) in (1, -1) and det_int(s.v) in (1, -1)
    nz = s.nonzero
    assert all(d > 0 for d in nz) and all(b % a_ == 0 for a_, b in zip(nz, nz[1:]))
    assert all(d == 0 for d in s.divisors[s.rank:])
    theirs = sympy_snf(sympy.Matrix(a), domain=sympy.ZZ)
    assert sorted(abs(theirs[i, i]) for i in range(min(rows, cols))) == sorted(s.divisors)


@given(matrices)
def test_det_against_sympy(a):
    n = min(len(a), len(a[0]))
    sq = [row[:n] for row in a[:n]]
    assert det_int(sq) == sympy.Matrix(sq).det()


def test_hand_computed_report():
    r = torsion_report(2, 1)
    assert r.divisors == (1, 1, 1)
    assert r.free_rank == 1 and r.torsion_free
    assert r.to_json()["basis_size"] == 4


@pytest.mark.parametrize("n", [2, 3])
def test_even_m_is_torsion_free(n):
    r = torsion_report(2, n)
    assert r.torsion_free and set(r.divisors) == {1}


def test_odd_m_has_an_order_two_class():
    # a functional killing every relation but not a_0 + 3 a_1, whose double is a relation
    rel = relation_matrix(3, 2)
    phi = [1 if z == 0 else 0 for z in rel.basis.indices]
    assert all(sum(p * c for p, c in zip(phi, row)) % 2 == 0 for row in rel.rows)
    x = [0] * rel.ncols
    x[rel.basis.position(Fraction(0))] = 1
    x[rel.basis.position(Fraction(1))] = 3
    assert sum(p * c for p, c in zip(phi, x)) % 2 == 1
    # -2x = (doubling row at z = 0) - 3 (symmetry row a_1 - a_2)
    pos = rel.basis.position
    sym = next(r for r in rel.rows[: rel.symmetry_rows] if r[pos(Fraction(1))])
    dbl = next(r for r in rel.rows[rel.symmetry_rows:] if r[pos(Fraction(0))])
    sign = sym[pos(Fraction(1))]
    assert [d - 3 * sign * s for d, s in zip(dbl, sym)] == [-2 * c for c in x]
    assert torsion_report(3, 2).divisors.count(2) == 1
