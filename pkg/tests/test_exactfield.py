from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hhcalc.errors import ParseError, ShapeError
from hhcalc.exactfield import (FieldSpec, Matrix, image_basis, kernel_basis, matmul, quotient_data, rank,
                               span_reduce)

import oracles

Q = FieldSpec.rational()
P = FieldSpec.prime()

small = st.integers(min_value=-5, max_value=5)


def matrices(max_rows=6, max_cols=6):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def rank_mod_p(rows, p):
    m = [[x % p for x in r] for r in rows]
    r = 0
    for c in range(len(m[0])):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def test_prime_check():
    with pytest.raises(ParseError, match="p must be prime"):
        FieldSpec.prime(4)
    with pytest.raises(ParseError):
        FieldSpec.prime(1)
    assert FieldSpec.prime(2).p == 2


def test_scalar_coercion():
    assert Q("1/2") == Fraction(1, 2)
    assert Q("4/2") == 2 and isinstance(Q("4/2"), int)
    assert P("1/2") * 2 % P.p == 1
    assert Q.to_text(Fraction(-3, 6)) == "-1/2"
    with pytest.raises(ParseError):
        Q(0.5)
    with pytest.raises(ParseError):
        FieldSpec.prime(3)("1/3")


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        P.inv(0)
    with pytest.raises(ZeroDivisionError):
        Q.inv(0)


def test_from_rows_shape():
    with pytest.raises(ShapeError):
        Matrix.from_rows(Q, [[1, 2], [3]])


def test_triples_accumulate():
    m = Matrix.from_triples(Q, 2, 2, [(0, 0, 1), (0, 0, "1/2"), (1, 1, 3)])
    assert m.tolist() == [[Fraction(3, 2), 0], [0, 3]]
    with pytest.raises(ShapeError):
        Matrix.from_triples(Q, 2, 2, [(2, 0, 1)])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_rational_matches_reference(rows):
    assert rank(Matrix.from_rows(Q, rows)) == oracles.rank([[Fraction(x) for x in r] for r in rows])


@settings(max_examples=60, deadline=None)
@given(matrices(), st.sampled_from([2, 3, 7, 32003]))
def test_rank_prime_matches_reference(rows, p):
    f = FieldSpec.prime(p)
    assert rank(Matrix.from_rows(f, rows)) == rank_mod_p(rows, p)


@settings(max_examples=40, deadline=None)
@given(matrices(), st.sampled_from([Q, P]))
def test_kernel_and_image(rows, f):
    m = Matrix.from_rows(f, rows)
    ker = kernel_basis(m)
    r = rank(m)
    assert ker.dim == m.cols - r
    if ker.dim:
        assert Matrix(f, matmul(f, m.data, ker.basis.T.copy())).is_zero()
    assert image_basis(m).dim == r
    assert rank(Matrix(f, m.data.T.copy())) == r


@settings(max_examples=40, deadline=None)
@given(matrices(), st.sampled_from([Q, P]))
def test_span_reduce_membership(rows, f):
    n = len(rows[0])
    sub = span_reduce(f, rows, n)
    arr = Matrix.from_rows(f, rows).data
    assert sub.contains_all(arr)
    assert sub.dim == rank(Matrix.from_rows(f, rows))
    q = quotient_data(sub)
    assert len(q.complement_indices) == n - sub.dim
    # the projection kills the subspace
    if sub.dim:
        assert Matrix(f, matmul(f, q.project.data, sub.basis.T.copy())).is_zero()


def test_span_reduce_is_canonical():
    a = span_reduce(Q, [[1, 2, 3], [0, 1, 1]], 3)
    b = span_reduce(Q, [[1, 3, 4], [2, 4, 6]], 3)
    assert a.equals(b)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5), st.data())
def test_modular_matmul_is_exact_near_word_size(r, k, c, data):
    p = 2_147_483_629  # largest prime below 2^31
    f = FieldSpec.prime(p)
    ent = st.integers(0, p - 1)
    a = data.draw(st.lists(st.lists(ent, min_size=k, max_size=k), min_size=r, max_size=r))
    b = data.draw(st.lists(st.lists(ent, min_size=c, max_size=c), min_size=k, max_size=k))
    got = matmul(f, np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    want = [[sum(a[i][t] * b[t][j] for t in range(k)) % p for j in range(c)] for i in range(r)]
    assert got.tolist() == want


def test_matmul_shape_error():
    with pytest.raises(ShapeError):
        matmul(Q, Matrix.identity(Q, 2).data, Matrix.identity(Q, 3).data)
