from __future__ import annotations

import itertools

import numpy as np
import pytest

from netcode.discrepancy import (
    FAILURE,
    INF,
    AbstractCode,
    DiscrepancyChannel,
    bounded_decode,
    check_normal,
    correction_bound,
    delta_min,
    delta_pair,
    erasure_channel,
    exhaustive_decode,
    fan_out,
    format_channel_table,
    hamming_channel,
    is_unambiguous,
    min_discrepancy_decode,
    parse_channel_table,
    sigma_detect,
    tau_code,
    tau_pair,
)
from netcode.errors import CodeNotTCorrecting, IdenticalInputs, NoFiniteCandidate, ParseError, UnknownInput

H2, H3, H4 = hamming_channel(2), hamming_channel(3), hamming_channel(4)
E1, E2, E3 = erasure_channel(1), erasure_channel(2), erasure_channel(3)


def code(ch, words):
    return AbstractCode.of(ch, words)


def test_fan_out_examples():
    assert fan_out(H2, "00", 0) == {"00"}
    assert fan_out(H2, "00", 1) == {"00", "01", "10"}
    assert fan_out(E1, "0", 1) == {"0", "e"}
    with pytest.raises(UnknownInput):
        fan_out(H2, "000", 1)


def test_unambiguity_and_exhaustive_decoding():
    rep = code(H3, ["000", "111"])
    assert is_unambiguous(code(H3, ["000"]), 3)
    assert is_unambiguous(rep, 1)
    assert not is_unambiguous(rep, 2)
    assert exhaustive_decode(rep, "001", 1) == "000"
    assert exhaustive_decode(rep, "001", 2) is FAILURE
    assert exhaustive_decode(code(H3, ["000"]), "111", 0) is FAILURE


def test_tau_and_delta_examples():
    assert tau_pair(H3, "000", "111") == 1
    assert tau_pair(H3, "000", "100") == 0
    assert tau_pair(E1, "0", "1") == 0
    assert tau_code(code(H3, ["000", "111"])) == 1
    assert tau_code(code(H2, ["00", "01"])) == 0
    assert tau_code(code(E3, ["000", "111"])) == 2
    assert tau_code(code(H3, ["000"])) == INF
    assert delta_pair(H3, "000", "110") == 2
    assert delta_pair(E2, "00", "01") == 2
    with pytest.raises(IdenticalInputs):
        tau_pair(H3, "000", "000")
    with pytest.raises(IdenticalInputs):
        delta_pair(H3, "000", "000")


def test_delta_matches_hamming_and_twice_hamming():
    for ch, factor in ((H3, 1), (E3, 2)):
        for x, y in itertools.combinations([w for w in ch.inputs], 2):
            assert delta_pair(ch, x, y) == factor * sum(a != b for a, b in zip(x, y))


def test_normality():
    assert check_normal(H3).normal
    gap = DiscrepancyChannel(["a", "b", "c"], ["a", "b", "c"], np.array([[0, 2, 2], [2, 0, 2], [2, 2, 0]]))
    res = check_normal(gap)
    assert not res.normal and res.counterexample[2] == 1


def test_erasure_channel_has_only_balanced_splits():
    # Splitting δ(00, 01) = 2 as (0, 2) needs y = 00, which 01 cannot produce.
    res = check_normal(E2)
    assert not res.normal and res.counterexample == ("00", "01", 0)
    # The balanced splits used by the capability formula do exist for every pair.
    for x, x2 in itertools.combinations(E3.inputs, 2):
        d = delta_pair(E3, x, x2)
        i, j = E3.input_index(x), E3.input_index(x2)
        splits = {(a, b) for a, b in zip(E3.table[i], E3.table[j]) if a + b == d}
        assert (d // 2, d - d // 2) in splits


@pytest.mark.parametrize("ch", [H3, H4, E2, E3], ids=["H3", "H4", "E2", "E3"])
def test_capability_formula_on_every_small_code(ch):
    words = ch.inputs
    for size in (2, 3):
        for c in itertools.combinations(words, size):
            cc = code(ch, c)
            tau = tau_code(cc)
            assert tau == correction_bound(delta_min(cc))
            assert is_unambiguous(cc, tau) and not is_unambiguous(cc, tau + 1)


def test_sigma_examples():
    assert sigma_detect(code(H3, ["000", "111"]), 0) == 2
    assert sigma_detect(code(H3, ["000", "111"]), 1) == 1
    assert sigma_detect(code(H4, ["0000", "1111"]), 1) == 2
    with pytest.raises(CodeNotTCorrecting):
        sigma_detect(code(H3, ["000", "111"]), 2)


def test_bounded_and_minimum_decoders():
    rep = code(H3, ["000", "111"])
    assert bounded_decode(rep, "100", 1) == "000"
    assert bounded_decode(rep, "110", 1) == "111"
    assert bounded_decode(rep, "100", 0) is FAILURE
    assert min_discrepancy_decode(rep, "100") == "000"
    assert min_discrepancy_decode(rep, "111") == "111"
    assert min_discrepancy_decode(code(H2, ["00", "11"]), "01") == "00"
    blocked = DiscrepancyChannel(["a", "b"], ["y", "z"], np.array([[0, INF], [0, INF]]))
    with pytest.raises(NoFiniteCandidate):
        min_discrepancy_decode(code(blocked, ["a", "b"]), "z")


def test_channel_table_roundtrip_and_errors():
    back = parse_channel_table(format_channel_table(E1))
    assert back.inputs == [0, 1] and len(back.outputs) == len(E1.outputs)
    assert np.array_equal(back.table, E1.table)
    with pytest.raises(ParseError):
        parse_channel_table("a b\nx 1\n")
    with pytest.raises(ParseError):
        parse_channel_table("a\nx -1\n")
