"""Exact linear algebra: Smith form against an independent minor-gcd oracle."""
from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from einfty.intlinalg import (IntMatrix, column_span_saturation, column_vector,
                              in_column_span, kernel_basis, quotient_invariants,
                              rank, smith, smith_normal_form, solve)


def minors_gcd_invariant_factors(rows):
    """Independent oracle: d_k = gcd(k-minors) / gcd((k-1)-minors)."""
    m = IntMatrix.from_rows(rows)
    n, c = m.shape
    dense = m.to_rows()

    def det(sub_rows, sub_cols):
        k = len(sub_rows)
        if k == 0:
            return 1
        total = 0
        first, rest = sub_rows[0], sub_rows[1:]
        for pos, j in enumerate(sub_cols):
            minor = det(rest, sub_cols[:pos] + sub_cols[pos + 1:])
            term = dense[first][j] * minor
            total += term if pos % 2 == 0 else -term
        return total

    previous = 1
    factors = []
    for k in range(1, min(n, c) + 1):
        g = 0
        for rr in combinations(range(n), k):
            for cc in combinations(range(c), k):
                g = gcd(g, det(list(rr), list(cc)))
        if g == 0:
            break
        factors.append(g // previous)
        previous = g
    return factors


def test_example_matrix_has_factors_2_4():
    s, u, v = smith_normal_form(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert [s[0, 0], s[1, 1]] == [2, 4]
    assert minors_gcd_invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert (u @ IntMatrix.from_rows([[2, 4], [6, 8]]) @ v) == s


def test_identity_and_zero():
    s, u, v = smith_normal_form(IntMatrix.identity(3))
    assert s == IntMatrix.identity(3)
    assert u == IntMatrix.identity(3) and v == IntMatrix.identity(3)
    s, u, v = smith_normal_form(IntMatrix.zero(2, 3))
    assert s.is_zero()
    assert u == IntMatrix.identity(2) and v == IntMatrix.identity(3)


small_matrix = st.integers(1, 4).flatmap(
    lambda n: st.integers(1, 4).flatmap(
        lambda c: st.lists(
            st.lists(st.integers(-9, 9), min_size=c, max_size=c),
            min_size=n, max_size=n)))


@settings(max_examples=60, deadline=None)
@given(small_matrix)
def test_smith_postconditions(rows):
    m = IntMatrix.from_rows(rows)
    sf = smith(m)
    assert (sf.u @ m @ sf.v) == sf.s
    assert (sf.u @ sf.uinv) == IntMatrix.identity(m.nrows)
    assert (sf.v @ sf.vinv) == IntMatrix.identity(m.ncols)
    facs = sf.invariant_factors()
    assert all(f > 0 for f in facs)
    for a, b in zip(facs, facs[1:]):
        assert b % a == 0
    # off-diagonal zero
    for (i, j), val in sf.s.data.items():
        assert i == j and val
    assert facs == minors_gcd_invariant_factors(rows)


@settings(max_examples=40, deadline=None)
@given(small_matrix)
def test_kernel_and_rank(rows):
    m = IntMatrix.from_rows(rows)
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert k.ncols + rank(m) == m.ncols
    assert rank(m) == smith(m).rank


@settings(max_examples=40, deadline=None)
@given(small_matrix, st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_solve_consistency(rows, coeffs):
    m = IntMatrix.from_rows(rows)
    coeffs = (coeffs * m.ncols)[: m.ncols]
    rhs = column_vector(m.apply(coeffs))
    x = solve(m, rhs)
    assert x is not None
    assert (m @ x) == rhs


def test_solve_unsolvable():
    m = IntMatrix.from_rows([[2, 0], [0, 3]])
    assert solve(m, column_vector([1, 0])) is None
    assert not in_column_span(m, [0, 1])
    assert in_column_span(m, [4, -9])


def test_saturation_of_scaled_lattice():
    m = IntMatrix.from_rows([[2, 0], [0, 4], [0, 0]])
    sat = column_span_saturation(m)
    assert sat.ncols == 2
    # saturation contains the primitive vectors e1, e2
    assert in_column_span(sat, [1, 0, 0])
    assert in_column_span(sat, [0, 1, 0])
    assert not in_column_span(sat, [0, 0, 1])


def test_quotient_invariants():
    assert quotient_invariants(2, IntMatrix.from_rows([[2, 0], [0, 1]])) == (0, [2])
    assert quotient_invariants(3, IntMatrix.zero(3, 0)) == (3, [])
    assert quotient_invariants(2, IntMatrix.from_rows([[2, 4], [6, 8]])) == (0, [2, 4])


def test_matrix_ops():
    a = IntMatrix.from_rows([[1, 2], [3, 4]])
    b = IntMatrix.from_rows([[0, 1], [1, 0]])
    assert (a @ b).to_rows() == [[2, 1], [4, 3]]
    assert (a + b - b) == a
    assert a.transpose().transpose() == a
    k = a.kron(IntMatrix.identity(2))
    assert k.shape == (4, 4) and k[0, 0] == 1 and k[2, 0] == 3
    assert a.hstack(b).shape == (2, 4)
    assert a.vstack(b).shape == (4, 2)
    with pytest.raises(ValueError):
        a @ IntMatrix.zero(3, 3)
