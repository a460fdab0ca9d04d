from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest

from netcode.errors import InvalidD, InvalidParameters, ParseError, SingletonCode
from netcode.ffmat import GF2, Matrix, field_make, mat_enumerate
from netcode.codes import (
    ExtField,
    GabidulinSpec,
    MatrixCode,
    SubspaceCode,
    gabidulin_generate,
    identity_lift,
    lift_to_subspaces,
    load_code,
    min_injection_distance,
    min_rank_distance,
    singleton_network_bounds,
    singleton_rank_bound,
    write_code,
)
from netcode.netmetrics import CoherentParams, ddist_coherent, subspace_distance
from netcode.spaces import Subspace, space_enumerate


def gab(q, m, n, k):
    return gabidulin_generate(GabidulinSpec(q, m, n, k))


def test_ext_field_is_a_field():
    for base, m in ((GF2, 3), (field_make(3), 2)):
        ext = ExtField(base, m)
        for a in range(1, ext.order):
            assert any(ext.mul[a][b] == 1 for b in range(ext.order))
        for a, b in itertools.product(range(ext.order), repeat=2):
            assert ext.frobenius(ext.add[a][b], 1) == ext.add[ext.frobenius(a, 1)][ext.frobenius(b, 1)]


def test_gabidulin_examples():
    c = gab(2, 2, 2, 1)
    assert len(c) == 4 and min_rank_distance(c) == 2
    c3 = gab(2, 3, 3, 1)
    assert len(c3) == 8 and min_rank_distance(c3) == 3
    full = gab(2, 2, 2, 2)
    assert len(full) == 16 and set(full) == set(mat_enumerate(GF2, 2, 2)) and min_rank_distance(full) == 1


@pytest.mark.parametrize("q,m,n", [(2, 2, 2), (2, 3, 2), (2, 3, 3), (3, 2, 2), (3, 2, 1)])
def test_gabidulin_codes_are_linear_and_mrd(q, m, n):
    for k in range(1, n + 1):
        c = gab(q, m, n, k)
        d = n - k + 1
        assert c.is_linear()
        if len(c) > 1:
            assert min_rank_distance(c) == d
        assert len(c) == singleton_rank_bound(q, n, m, d)


def test_gabidulin_parameter_errors():
    with pytest.raises(InvalidParameters):
        GabidulinSpec(2, 2, 3, 1)
    with pytest.raises(InvalidParameters):
        GabidulinSpec(2, 3, 2, 0)
    with pytest.raises(InvalidParameters):
        gabidulin_generate(GabidulinSpec(2, 2, 2, 1, points=(1, 1)))


def test_min_rank_distance_examples():
    i3 = Matrix.identity(GF2, 3)
    assert min_rank_distance(MatrixCode.of([Matrix.zeros(GF2, 3, 3), i3])) == 3
    with pytest.raises(SingletonCode):
        min_rank_distance(MatrixCode.of([i3]))


def test_singleton_rank_bound_examples():
    assert singleton_rank_bound(2, 2, 2, 2) == 4
    assert singleton_rank_bound(2, 2, 3, 1) == 2**6
    assert singleton_rank_bound(2, 2, 3, 2) == 8
    with pytest.raises(InvalidD):
        singleton_rank_bound(2, 2, 2, 3)


def test_network_bounds_examples():
    c = gab(2, 2, 2, 1)
    b = singleton_network_bounds(c, 2, n=2, rho=0, Q=4)
    assert b.bound15 == 4 and b.achieved and not b.degenerate
    c3 = gab(2, 3, 3, 1)
    b3 = singleton_network_bounds(c3, 3 - 1, n=3, rho=1, Q=8)
    assert b3.bound15 == 8 and b3.achieved
    deg = singleton_network_bounds(2, 2, n=2, rho=2, Q=4)
    assert deg.degenerate and deg.bound15 == Fraction(1, 4)


def test_mrd_delta_equals_rank_distance_minus_rho():
    c = gab(2, 3, 3, 1)
    for a in mat_enumerate(GF2, 3, 3):
        rho = 3 - a.rank()
        p = CoherentParams(a)
        delta = min(ddist_coherent(p, x, y) for x, y in itertools.combinations(c.codewords, 2))
        assert delta == 3 - rho


def test_lift_examples():
    z, i2 = Matrix.zeros(GF2, 2, 2), Matrix.identity(GF2, 2)
    s, injective = lift_to_subspaces(MatrixCode.of([z, i2]))
    assert len(s) == 2 and injective
    x = Matrix.from_rows(GF2, [[1, 1], [0, 1]])
    r = Matrix.from_rows(GF2, [[0, 1], [1, 0]])
    s, injective = lift_to_subspaces(MatrixCode.of([x, r @ x]))
    assert len(s) == 1 and not injective
    c = gab(2, 2, 2, 1)
    _, injective = lift_to_subspaces(c)
    assert not injective  # 0 and the rank-2 words: every invertible codeword spans F_2^2
    lifted, ok = lift_to_subspaces(identity_lift(c))
    assert ok and len(lifted) == 4


def test_min_injection_distance_examples():
    e1 = Subspace.span(GF2, [[1, 0, 0]])
    e2 = Subspace.span(GF2, [[0, 1, 0]])
    assert min_injection_distance(SubspaceCode.of([e1, e2])) == 1
    assert min_injection_distance(SubspaceCode.of([e1, Subspace.full(GF2, 3)])) == 2
    planes = list(space_enumerate(GF2, 4, 2))[:6]
    s = SubspaceCode.of(planes)
    dS = min(subspace_distance(a, b) for a, b in itertools.combinations(planes, 2))
    assert 2 * min_injection_distance(s) == dS
    with pytest.raises(SingletonCode):
        min_injection_distance(SubspaceCode.of([e1]))


def test_code_files(tmp_path):
    c = gab(2, 2, 2, 1)
    path = tmp_path / "c.mat"
    write_code(path, c)
    assert load_code(path) == c
    desc = tmp_path / "c.json"
    desc.write_text(json.dumps({"kind": "gabidulin", "q": 2, "m": 2, "n": 2, "k": 1}))
    assert load_code(desc) == c
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "reed-solomon"}))
    with pytest.raises(ParseError):
        load_code(bad)
