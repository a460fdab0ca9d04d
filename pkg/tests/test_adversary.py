from __future__ import annotations

import itertools
import json
from fractions import Fraction

import pytest

from netcode.adversary import (
    CONFIRMED,
    TransferFamily,
    coherent_attack,
    coherent_code_delta,
    example4_scenario,
    rank_achiever,
    noncoherent_attack,
    verify_correction_theorem,
    yeung_attack,
)
from netcode.codes import GabidulinSpec, MatrixCode, gabidulin_generate
from netcode.decode import decode_coherent
from netcode.errors import InvalidL, SplitOutOfRange, UnreachablePair
from netcode.ffmat import GF2, Matrix, mat_enumerate
from netcode.netmetrics import (
    CoherentParams,
    NoncoherentParams,
    YeungParams,
    ddist_coherent,
    ddist_noncoherent,
    ddist_yeung,
    disc_coherent,
    disc_noncoherent,
    disc_rho_sigma,
    disc_yeung,
)
from netcode.spaces import intersection_dim, row_space, space_enumerate

ALL22 = list(mat_enumerate(GF2, 2, 2))
I2, Z2 = Matrix.identity(GF2, 2), Matrix.zeros(GF2, 2, 2)
MRD3 = gabidulin_generate(GabidulinSpec(2, 3, 3, 1))


def test_coherent_attack_examples():
    p = CoherentParams(I2)
    x, x2 = Z2, I2
    atk0 = coherent_attack(p, x, x2, 0)
    assert atk0.Y == x and atk0.claimed == (0, 2)
    atk2 = coherent_attack(p, x, x2, 2)
    assert atk2.Y == x2 and atk2.claimed == (2, 0)
    atk1 = coherent_attack(p, x, x2, 1)
    assert (disc_coherent(p, x, atk1.Y), disc_coherent(p, x2, atk1.Y)) == (1, 1)
    with pytest.raises(SplitOutOfRange):
        coherent_attack(p, x, x2, 3)


def test_coherent_attack_every_split():
    for a in ALL22:
        p = CoherentParams(a)
        for x, x2 in itertools.combinations(ALL22, 2):
            d = ddist_coherent(p, x, x2)
            for i in range(d + 1):
                y = coherent_attack(p, x, x2, i).Y
                assert (disc_coherent(p, x, y), disc_coherent(p, x2, y)) == (i, d - i)


def test_yeung_attack_every_split():
    for a, f in [(I2, I2), (I2, Matrix.from_rows(GF2, [[1, 1], [0, 1]])), (Matrix.from_rows(GF2, [[1, 0], [0, 0]]), I2)]:
        p = YeungParams(a, f)
        for x1, x2 in itertools.combinations(ALL22, 2):
            d = ddist_yeung(p, x1, x2)
            assert endpoints_are_codeword_images(p, x1, x2, d)
            for i in range(d + 1):
                y = yeung_attack(p, x1, x2, i).Y
                assert (disc_yeung(p, x1, y), disc_yeung(p, x2, y)) == (i, d - i)


def endpoints_are_codeword_images(p, x1, x2, d):
    return yeung_attack(p, x1, x2, 0).Y == p.A @ x1 and yeung_attack(p, x1, x2, d).Y == p.A @ x2


def test_yeung_attack_unreachable():
    p = YeungParams(I2, Matrix.from_rows(GF2, [[1, 0], [0, 0]]))
    with pytest.raises(UnreachablePair):
        yeung_attack(p, Z2, Matrix.from_rows(GF2, [[0, 0], [1, 0]]), 0)


def test_noncoherent_attack_every_split():
    for rho in (0, 1, 2):
        p = NoncoherentParams(rho, N=2)
        for x, x2 in itertools.combinations(ALL22, 2):
            d = ddist_noncoherent(p, x, x2)
            for i in range(d + 1):
                atk = noncoherent_attack(p, x, x2, i)
                assert (disc_noncoherent(p, x, atk.Y), disc_noncoherent(p, x2, atk.Y)) == (i, d - i)
                assert atk.witness["A"].rank() >= 2 - rho


def test_rank_achiever_reaches_closed_form():
    for rho, sigma, L in itertools.product((0, 1, 2), (0, 1, 2), (2, 3)):
        for x, y in itertools.product(ALL22, ALL22):
            ach = rank_achiever(x, y, rho, sigma, L)
            a, b = ach["A"], ach["B"]
            assert a.shape == (L, 2) and b.shape == (L, 2)
            assert a.rank() >= 2 - rho and b.rank() >= 2 - sigma
            assert (b @ y - a @ x).rank() == disc_rho_sigma(NoncoherentParams(rho, sigma), x, y, L)
    with pytest.raises(InvalidL):
        rank_achiever(I2, I2, 0, 0, 1)


def test_vectorized_coherent_sweep_matches_decoder():
    code = MatrixCode.of([Z2, I2, Matrix.from_rows(GF2, [[0, 1], [1, 1]])])
    for a in ALL22:
        p = CoherentParams(a)
        assert coherent_code_delta(code, a) == min(ddist_coherent(p, x, y) for x, y in itertools.combinations(code, 2))
        for t in (0, 1):
            rep = verify_correction_theorem("coherent", code, p, t, mode="exhaustive")
            ok = 0
            errs = [e for e in ALL22 if e.rank() <= t]
            for c, x in enumerate(code):
                for e in errs:
                    out = decode_coherent(code, p, a @ x + e)
                    ok += out.result == c and out.tie_count == 1
            assert (rep.trials, rep.successes) == (len(code) * len(errs), ok)
            assert rep.verdict == CONFIRMED


def test_received_row_spaces_match_literal_reachability():
    code = MatrixCode.of([I2, Matrix.from_rows(GF2, [[1, 1], [0, 0]])])
    spaces = list(space_enumerate(GF2, 2))
    for rho, t in itertools.product((0, 1), (0, 1, 2)):
        p = NoncoherentParams(rho, N=2)
        transfers = [a for a in ALL22 if a.rank() >= 2 - rho]
        errs = [e for e in ALL22 if e.rank() <= t]
        for x in code:
            literal = {row_space(a @ x + e) for a in transfers for e in errs}
            by_class = {u for u in spaces if max(x.rank() - rho, u.dim) - _inter(x, u) <= t}
            assert literal == by_class
        lit = verify_correction_theorem("noncoherent", code, p, t)
        assert lit.details["adversary_space"] == "transfer and error matrices"
        assert lit.verdict == CONFIRMED


def _inter(x, u):
    return intersection_dim(row_space(x), u)


def test_verify_small_code_both_directions():
    code = MatrixCode.of([Z2, I2])
    p = CoherentParams(I2)
    ok = verify_correction_theorem("coherent", code, p, 0)
    assert ok.verdict == CONFIRMED and ok.predicted_success and ok.failures == 0
    bad = verify_correction_theorem("coherent", code, p, 1)
    assert bad.verdict == CONFIRMED and not bad.predicted_success
    assert bad.witness["decoder_failed"] and bad.witness["effort"] == 1
    json.dumps(bad.to_json())


def test_verify_mrd_transfer_families():
    fail = verify_correction_theorem("coherent", MRD3, TransferFamily(1), 1)
    assert fail.verdict == CONFIRMED and not fail.predicted_success and fail.witness["decoder_failed"]
    ok = verify_correction_theorem("coherent", MRD3, TransferFamily(0), 1)
    assert ok.verdict == CONFIRMED and ok.predicted_success and ok.failures == 0


def test_verify_yeung_and_randomized_modes():
    code = MatrixCode.of([Z2, I2])
    p = YeungParams(I2, I2)
    for t in (0, 1):
        rep = verify_correction_theorem("yeung", code, p, t)
        assert rep.verdict == CONFIRMED
        assert rep.predicted_success == (2 > 2 * t)
    rnd = verify_correction_theorem("coherent", MRD3, CoherentParams(Matrix.identity(GF2, 3)), 1, mode="randomized", trials=300, seed=7)
    assert rnd.mode == "randomized" and rnd.seed == 7 and rnd.verdict == CONFIRMED
    again = verify_correction_theorem("coherent", MRD3, CoherentParams(Matrix.identity(GF2, 3)), 1, mode="randomized", trials=300, seed=7)
    assert again.to_json() == rnd.to_json()


@pytest.mark.slow
def test_three_codeword_scenario():
    rep = example4_scenario()
    det = rep.details
    d, gamma = det["d"], det["gamma"]
    assert 3 * gamma > d and 2 * gamma < d
    eps = Fraction(det["eps"])
    assert eps == Fraction(d - gamma, 2) and eps < gamma
    assert det["t_M"] >= det["t_S"] + 1
    assert rep.verdict == CONFIRMED
