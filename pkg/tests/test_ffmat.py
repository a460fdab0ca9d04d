from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netcode.errors import (
    DivisionByZero,
    EnumerationBudgetExceeded,
    FieldMismatch,
    FieldTooLarge,
    NonPrimeCharacteristic,
    ParseError,
    ReducibleModulus,
    SplitOutOfRange,
)
from netcode.ffmat import (
    GF2,
    Matrix,
    decomposition_split,
    field_make,
    format_matrix,
    format_matrix_list,
    full_rank_decomposition,
    left_kernel,
    mat_enumerate,
    mat_rank,
    nullspace,
    parse_matrix,
    parse_matrix_list,
    solve,
)

FIELDS = [field_make(2), field_make(3), field_make(2, 2), field_make(5), field_make(2, 3), field_make(3, 2), field_make(2, 4)]


def M(rows, f=GF2):
    return Matrix.from_rows(f, rows)


# -- fields ------------------------------------------------------------------


def test_field_make_defaults():
    assert field_make(2).q == 2
    assert field_make(3).q == 3
    gf4 = field_make(2, 2)
    assert gf4.q == 4 and tuple(gf4.modulus) == (1, 1, 1)


def test_field_errors():
    with pytest.raises(NonPrimeCharacteristic):
        field_make(4)
    with pytest.raises(ReducibleModulus):
        field_make(2, 2, (1, 0, 1))  # x² + 1 = (x + 1)²
    with pytest.raises(FieldTooLarge):
        field_make(2, 5)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF{f.q}")
def test_mul_table_matches_polynomial_product(f):
    for a, b in itertools.product(range(f.q), repeat=2):
        assert f.mul[a][b] == f.poly_mul(a, b)


@pytest.mark.parametrize("f", FIELDS, ids=lambda f: f"GF{f.q}")
def test_field_axioms(f):
    q = f.q
    for a in range(q):
        assert f.add[a][0] == a and f.mul[a][1] == a
        assert f.add[a][f.neg[a]] == 0
        assert f.sub[a][a] == 0
        if a:
            assert f.mul[a][f.inverse(a)] == 1
    for a, b, c in itertools.product(range(q), repeat=3):
        assert f.mul[a][f.add[b][c]] == f.add[f.mul[a][b]][f.mul[a][c]]


def test_field_element_examples():
    gf2 = field_make(2)
    assert (gf2.element(1) + gf2.element(1)).value == 0
    gf4 = field_make(2, 2)
    alpha = gf4.element(2)  # the class of x
    assert (alpha * alpha).value == 3  # x² = x + 1
    gf3 = field_make(3)
    assert gf3.element(2).inverse().value == 2


def test_field_element_errors():
    with pytest.raises(DivisionByZero):
        field_make(3).element(0).inverse()
    with pytest.raises(FieldMismatch):
        field_make(3).element(1) + field_make(5).element(1)


# -- matrices --------------------------------------------------------------


def test_rank_examples():
    assert mat_rank(Matrix.identity(GF2, 3)) == 3
    assert mat_rank(Matrix.zeros(GF2, 2, 4)) == 0
    assert mat_rank(M([[1, 0], [1, 0]])) == 1


def test_full_rank_decomposition_examples():
    p, q = full_rank_decomposition(Matrix.identity(GF2, 2))
    assert p == Matrix.identity(GF2, 2) and q == Matrix.identity(GF2, 2)
    p, q = full_rank_decomposition(Matrix.zeros(GF2, 2, 3))
    assert p.shape == (2, 0) and q.shape == (0, 3)
    p, q = full_rank_decomposition(M([[1, 1], [1, 1]]))
    assert p == M([[1], [1]]) and q == M([[1, 1]])


def test_decomposition_split_examples():
    i2 = Matrix.identity(GF2, 2)
    assert decomposition_split(i2, 0) == (Matrix.zeros(GF2, 2, 2), i2)
    assert decomposition_split(i2, 2) == (i2, Matrix.zeros(GF2, 2, 2))
    w, w2 = decomposition_split(i2, 1)
    assert w == M([[1, 0], [0, 0]]) and w2 == M([[0, 0], [0, 1]])
    with pytest.raises(SplitOutOfRange):
        decomposition_split(i2, 3)


def test_enumerate_examples():
    assert [m.entries for m in mat_enumerate(GF2, 1, 1)] == [(0,), (1,)]
    assert len(list(mat_enumerate(GF2, 2, 2, min_rank=2))) == 6
    assert len(list(mat_enumerate(field_make(3), 1, 2))) == 9


def test_enumerate_budget(monkeypatch):
    monkeypatch.setenv("NETCODE_BUDGET", "100")
    with pytest.raises(EnumerationBudgetExceeded):
        list(mat_enumerate(GF2, 3, 3))


def matrices(f, max_rows=4, max_cols=4):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.integers(0, f.q - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda ent: Matrix(f, rc[0], rc[1], tuple(ent))
        )
    )


@pytest.mark.parametrize("f", [GF2, field_make(3), field_make(2, 2)], ids=lambda f: f"GF{f.q}")
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_matrix_properties(f, data):
    x = data.draw(matrices(f))
    r = x.rank()
    assert r == x.T.rank() <= min(x.shape)
    red, piv = x.rref()
    assert red.rref() == (red, piv) and red.rank() == r == len(piv)
    assert red.row_basis() == x.row_basis()
    p, q = full_rank_decomposition(x)
    assert p.shape == (x.rows, r) and q.shape == (r, x.cols) and p @ q == x
    for i in range(r + 1):
        w, w2 = decomposition_split(x, i)
        assert w + w2 == x and w.rank() == i and w2.rank() == r - i
    k = nullspace(x)
    assert k.rows == x.cols - r and (x @ k.T).is_zero()
    lk = left_kernel(x)
    assert lk.rows == x.rows - r and (lk @ x).is_zero()


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_solve_agrees_with_membership(data):
    f = field_make(3)
    a = data.draw(matrices(f, 3, 3))
    b = data.draw(st.lists(st.integers(0, 2), min_size=a.rows, max_size=a.rows).map(lambda e: Matrix(f, a.rows, 1, tuple(e))))
    x = solve(a, b)
    consistent = Matrix.from_rows(f, [list(a.row(r)) + [b[r, 0]] for r in range(a.rows)]).rank() == a.rank()
    assert (x is not None) == consistent
    if x is not None:
        assert a @ x == b


# -- text format -------------------------------------------------------------


def test_format_roundtrip():
    f = field_make(2, 2)
    mats = [Matrix.from_rows(f, [[0, 1, 2], [3, 2, 1]]), Matrix.zeros(f, 0, 3), Matrix.zeros(f, 2, 0)]
    back = parse_matrix_list(format_matrix_list(mats))
    assert back == mats
    assert parse_matrix(format_matrix(mats[0])) == mats[0]


@pytest.mark.parametrize(
    "text",
    ["garbage\n", "2 2 2\n1 0\n", "2 1 2\n1 2\n", "4 1 1\n", "6 1 1\n0\n", "2 1 2\n1 0 1\n"],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_matrix_list(text)
