from __future__ import annotations

import itertools

import pytest

from netcode.adversary import coherent_attack, nested_received_space, find_three_codeword_instance
from netcode.codes import GabidulinSpec, MatrixCode, SubspaceCode, gabidulin_generate
from netcode.decode import (
    code_delta,
    decode_bounded,
    decode_coherent,
    decode_noncoherent,
    decode_subspace,
    decode_yeung,
)
from netcode.discrepancy import FAILURE, INF
from netcode.errors import CodeNotTCorrecting, InvalidParameters
from netcode.ffmat import GF2, Matrix, mat_enumerate
from netcode.netmetrics import CoherentParams, NoncoherentParams, YeungParams, disc_coherent, subspace_distance
from netcode.spaces import Subspace, space_enumerate

MRD3 = gabidulin_generate(GabidulinSpec(2, 3, 3, 1))
I3 = Matrix.identity(GF2, 3)


def as_matrix(u: Subspace, rows: int) -> Matrix:
    """Basis of u padded with zero rows."""
    pad = [[0] * u.ambient for _ in range(rows - u.dim)]
    return Matrix.from_rows(u.field, u.basis.to_rows() + pad, u.ambient)


def test_coherent_exact_output():
    p = CoherentParams(I3)
    for idx, x in enumerate(MRD3):
        out = decode_coherent(MRD3, p, x)
        assert out.result == idx and out.discrepancy == 0 and out.tie_count == 1


def test_coherent_corrects_single_rank_errors():
    p = CoherentParams(I3)
    errors = [e for e in mat_enumerate(GF2, 3, 3) if e.rank() <= 1]
    for idx, x in enumerate(MRD3):
        for e in errors:
            out = decode_coherent(MRD3, p, x + e)
            assert out.result == idx and out.tie_count == 1


def test_coherent_attack_forces_tie():
    code = MatrixCode.of([Matrix.zeros(GF2, 2, 2), Matrix.identity(GF2, 2)])
    p = CoherentParams(Matrix.identity(GF2, 2))
    atk = coherent_attack(p, code.codewords[0], code.codewords[1], 1)
    assert decode_coherent(code, p, atk.Y).tie_count == 2


def test_yeung_decoding():
    f = Matrix.from_rows(GF2, [[1, 0], [0, 1], [1, 1]])
    a = I3
    p = YeungParams(a, f)
    for idx, x in enumerate(MRD3):
        assert decode_yeung(MRD3, p, x).result == idx
    delta = code_delta(MRD3, "yeung", p)
    t = (delta - 1) // 2
    for idx, x in enumerate(MRD3):
        for e in mat_enumerate(GF2, 2, 3):
            if sum(any(r) for r in e.to_rows()) <= t:
                out = decode_yeung(MRD3, p, x + f @ e)
                assert out.result == idx and out.tie_count == 1
    blocked = YeungParams(a, Matrix.zeros(GF2, 3, 2))
    y = MRD3.codewords[1] + Matrix.from_rows(GF2, [[0, 0, 1], [0, 0, 0], [0, 0, 0]])
    assert y not in MRD3.codewords
    out = decode_yeung(MRD3, blocked, y)
    assert out.result is FAILURE and out.discrepancy == INF


def test_noncoherent_full_rank_transfer():
    code = gabidulin_generate(GabidulinSpec(2, 2, 2, 1))
    lifted = MatrixCode.of([Matrix.from_rows(GF2, [[1, 0] + list(x.row(0)), [0, 1] + list(x.row(1))]) for x in code])
    p = NoncoherentParams(0)
    a = Matrix.from_rows(GF2, [[1, 1], [0, 1]])
    for idx, x in enumerate(lifted):
        assert decode_noncoherent(lifted, p, a @ x).result == idx


def nested_instance():
    inst = find_three_codeword_instance()
    v1, v2, _ = inst.spaces
    return inst, v1, v2, nested_received_space(v1, v2)


def test_nested_instance_decoders_disagree():
    inst, v1, v2, u = nested_instance()
    assert subspace_distance(v1, u) == inst.gamma
    assert subspace_distance(v2, u) == inst.d - inst.gamma
    assert decode_subspace(SubspaceCode.of([v1, v2]), u).result == 0
    rows = v2.dim
    code = MatrixCode.of([as_matrix(v1, rows), as_matrix(v2, rows)])
    out = decode_noncoherent(code, NoncoherentParams(0), as_matrix(u, rows))
    assert out.result == 1 and out.discrepancy == inst.eps < inst.gamma


def test_subspace_decoder_membership_and_agreement():
    planes = list(space_enumerate(GF2, 4, 2))
    every = list(space_enumerate(GF2, 4))
    for v, w in itertools.islice(itertools.combinations(planes, 2), 0, None, 15):
        s = SubspaceCode.of([v, w])
        assert decode_subspace(s, v).result == 0 and decode_subspace(s, w).result == 1
        code = MatrixCode.of([as_matrix(v, 4), as_matrix(w, 4)])
        for u in every:
            a = decode_subspace(s, u)
            b = decode_noncoherent(code, NoncoherentParams(0), as_matrix(u, 4))
            assert (a.result, a.tie_count) == (b.result, b.tie_count)


def test_bounded_decoder_detects_without_error():
    p = CoherentParams(I3)
    delta = code_delta(MRD3, "coherent", p)
    t = 1
    sigma = delta - t - 1
    for idx, x in enumerate(MRD3):
        assert decode_bounded(MRD3, "coherent", p, x, t).result == idx
    for y in itertools.islice(mat_enumerate(GF2, 3, 3), 0, None, 7):
        out = decode_bounded(MRD3, "coherent", p, y, t)
        for idx, x in enumerate(MRD3):
            if disc_coherent(p, x, y) <= sigma:
                assert out.result in (idx, FAILURE)
                if disc_coherent(p, x, y) > t:
                    assert out.result is FAILURE
    with pytest.raises(CodeNotTCorrecting):
        decode_bounded(MRD3, "coherent", p, I3, 2)
    with pytest.raises(InvalidParameters):
        decode_bounded(MRD3, "telepathy", p, I3, 0)
