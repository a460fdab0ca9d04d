"""Generic adversarial channels over finite alphabets.

A channel is a table ``Δ(x, y)`` of adversarial effort needed to turn input
``x`` into output ``y``, with ``math.inf`` marking outputs that are never
reachable.  Everything here (fan-out sets, correction and detection
capabilities, decoders, normality) is computed by scanning that table.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from .budget import check_budget
from .errors import (
    CodeNotTCorrecting,
    IdenticalInputs,
    NoFiniteCandidate,
    ParseError,
    UnknownInput,
)

INF = math.inf

ExtendedNat = Any  # int, or math.inf


def nat(v: float) -> ExtendedNat:
    """Normalize a table value to ``int`` or ``math.inf``."""
    return INF if v == INF else int(v)


def floor_half(v: ExtendedNat) -> ExtendedNat:
    """⌊v/2⌋ that keeps infinity infinite (``inf // 2`` is nan in Python)."""
    return INF if v == INF else v // 2


def correction_bound(delta: ExtendedNat) -> ExtendedNat:
    """⌊(δ − 1)/2⌋, which is -1 when δ = 0."""
    return INF if delta == INF else (delta - 1) // 2


class _Failure:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "FAILURE"

    def __bool__(self) -> bool:
        return False

    def __reduce__(self):
        return (_Failure, ())


FAILURE = _Failure()


class DiscrepancyChannel:
    """Finite input/output alphabets with a discrepancy table.

    ``inputs`` and ``outputs`` hold arbitrary hashable labels.  Pair tables
    (Δ-distance and τ) are computed once on first use.
    """

    def __init__(self, inputs: Sequence[Hashable], outputs: Sequence[Hashable], table: np.ndarray, name: str = ""):
        table = np.asarray(table, dtype=float)
        if not len(inputs) or not len(outputs):
            raise ValueError("alphabets must be nonempty")
        if table.shape != (len(inputs), len(outputs)):
            raise ValueError(f"table shape {table.shape} does not match alphabets")
        if np.isnan(table).any() or (table < 0).any():
            raise ValueError("discrepancies must be nonnegative or inf")
        self.inputs = list(inputs)
        self.outputs = list(outputs)
        self.table = table
        self.table.setflags(write=False)
        self.name = name
        self._in_index = {x: i for i, x in enumerate(self.inputs)}
        self._out_index = {y: j for j, y in enumerate(self.outputs)}
        self._delta: np.ndarray | None = None
        self._tau: np.ndarray | None = None

    @classmethod
    def from_function(
        cls,
        inputs: Sequence[Hashable],
        outputs: Sequence[Hashable],
        disc: Callable[[Any, Any], ExtendedNat],
        name: str = "",
    ) -> "DiscrepancyChannel":
        check_budget(len(inputs) * len(outputs), "discrepancy table")
        table = np.array([[float(disc(x, y)) for y in outputs] for x in inputs], dtype=float)
        return cls(inputs, outputs, table, name)

    # -- indexing -----------------------------------------------------------

    def input_index(self, x: Hashable) -> int:
        try:
            return self._in_index[x]
        except (KeyError, TypeError):
            raise UnknownInput(f"{x!r} is not in the input alphabet") from None

    def output_index(self, y: Hashable) -> int:
        try:
            return self._out_index[y]
        except (KeyError, TypeError):
            raise UnknownInput(f"{y!r} is not in the output alphabet") from None

    def disc(self, x: Hashable, y: Hashable) -> ExtendedNat:
        return nat(self.table[self.input_index(x), self.output_index(y)])

    # -- pair tables ----------------------------------------------------------

    def delta_matrix(self) -> np.ndarray:
        """δ(x, x′) = min_y Δ(x,y) + Δ(x′,y) for every input pair."""
        if self._delta is None:
            d = self.table
            out = np.empty((len(self.inputs), len(self.inputs)))
            for i in range(len(self.inputs)):
                out[i] = np.min(d[i][None, :] + d, axis=1)
            out.setflags(write=False)
            self._delta = out
        return self._delta

    def tau_matrix(self) -> np.ndarray:
        """τ(x, x′) = min_y max{Δ(x,y), Δ(x′,y)} − 1 for every input pair."""
        if self._tau is None:
            d = self.table
            out = np.empty((len(self.inputs), len(self.inputs)))
            for i in range(len(self.inputs)):
                out[i] = np.min(np.maximum(d[i][None, :], d), axis=1) - 1
            out.setflags(write=False)
            self._tau = out
        return self._tau

    def __repr__(self) -> str:
        label = f" {self.name}" if self.name else ""
        return f"<DiscrepancyChannel{label} |X|={len(self.inputs)} |Y|={len(self.outputs)}>"


@dataclass(frozen=True)
class AbstractCode:
    channel: DiscrepancyChannel
    codewords: tuple

    def __post_init__(self) -> None:
        if not self.codewords:
            raise ValueError("a code needs at least one codeword")
        idx = [self.channel.input_index(c) for c in self.codewords]
        if len(set(idx)) != len(idx):
            raise ValueError("duplicate codewords")
        object.__setattr__(self, "indices", tuple(idx))

    @classmethod
    def of(cls, channel: DiscrepancyChannel, codewords: Iterable[Hashable]) -> "AbstractCode":
        return cls(channel, tuple(codewords))

    def __len__(self) -> int:
        return len(self.codewords)


# ---------------------------------------------------------------------------
# Channel-level quantities
# ---------------------------------------------------------------------------


def fan_out(ch: DiscrepancyChannel, x: Hashable, t: ExtendedNat) -> set:
    row = ch.table[ch.input_index(x)]
    return {ch.outputs[j] for j in np.flatnonzero(row <= t)}


def _distinct(ch: DiscrepancyChannel, x: Hashable, x2: Hashable) -> tuple[int, int]:
    i, j = ch.input_index(x), ch.input_index(x2)
    if i == j:
        raise IdenticalInputs(f"{x!r} given twice")
    return i, j


def tau_pair(ch: DiscrepancyChannel, x: Hashable, x2: Hashable) -> ExtendedNat:
    i, j = _distinct(ch, x, x2)
    return nat(np.min(np.maximum(ch.table[i], ch.table[j])) - 1)


def delta_pair(ch: DiscrepancyChannel, x: Hashable, x2: Hashable) -> ExtendedNat:
    i, j = _distinct(ch, x, x2)
    return nat(np.min(ch.table[i] + ch.table[j]))


@dataclass
class NormalityResult:
    normal: bool
    pairs_checked: int = 0
    counterexample: tuple | None = None  # (x, x′, i)

    def __bool__(self) -> bool:
        return self.normal


def check_normal(
    ch: DiscrepancyChannel, pairs: Iterable[tuple[Hashable, Hashable]] | None = None
) -> NormalityResult:
    """Check that every split 0 ≤ i ≤ δ(x,x′) is realized by some output.

    ``pairs`` defaults to every unordered pair of inputs, including ``x = x′``.
    Pairs at infinite Δ-distance impose no condition and are skipped.
    """
    n = len(ch.inputs)
    if pairs is None:
        check_budget(n * (n + 1) // 2 * len(ch.outputs), "normality scan")
        idx_pairs: Iterable[tuple[int, int]] = itertools.combinations_with_replacement(range(n), 2)
    else:
        idx_pairs = [(ch.input_index(a), ch.input_index(b)) for a, b in pairs]
    d = ch.table
    checked = 0
    for i, j in idx_pairs:
        di, dj = d[i], d[j]
        delta = np.min(di + dj)
        checked += 1
        if delta == INF:
            continue
        on_path = (di + dj) == delta
        realized = set(di[on_path].astype(int).tolist())
        for split in range(int(delta) + 1):
            if split not in realized:
                return NormalityResult(False, checked, (ch.inputs[i], ch.inputs[j], split))
    return NormalityResult(True, checked)


# ---------------------------------------------------------------------------
# Code-level quantities
# ---------------------------------------------------------------------------


def _pair_min(code: AbstractCode, mat: np.ndarray) -> ExtendedNat:
    idx = np.array(code.indices)
    sub = mat[np.ix_(idx, idx)]
    mask = ~np.eye(len(idx), dtype=bool)
    return nat(np.min(sub[mask]))


def tau_code(code: AbstractCode) -> ExtendedNat:
    """Exact correction capability; infinite for a single-codeword code."""
    if len(code) < 2:
        return INF
    return _pair_min(code, code.channel.tau_matrix())


def delta_min(code: AbstractCode) -> ExtendedNat:
    if len(code) < 2:
        return INF
    return _pair_min(code, code.channel.delta_matrix())


def is_unambiguous(code: AbstractCode, t: ExtendedNat) -> bool:
    """True iff the fan-out sets of the codewords at effort t are pairwise disjoint."""
    reach = code.channel.table[list(code.indices)] <= t
    return bool(np.all(reach.sum(axis=0) <= 1))


def exhaustive_decode(code: AbstractCode, y: Hashable, t: ExtendedNat):
    col = code.channel.table[:, code.channel.output_index(y)]
    hits = [c for c, i in zip(code.codewords, code.indices) if col[i] <= t]
    return hits[0] if len(hits) == 1 else FAILURE


def bounded_decode(code: AbstractCode, y: Hashable, t: ExtendedNat):
    # With one codeword inside the radius, every other codeword is outside it.
    return exhaustive_decode(code, y, t)


def min_discrepancy_decode(code: AbstractCode, y: Hashable):
    col = code.channel.table[:, code.channel.output_index(y)]
    vals = [col[i] for i in code.indices]
    best = min(vals)
    if best == INF:
        raise NoFiniteCandidate(f"no codeword reaches {y!r}")
    return code.codewords[vals.index(best)]


def sigma_pair(ch: DiscrepancyChannel, x: Hashable, x2: Hashable, t: ExtendedNat) -> ExtendedNat:
    """min over outputs within effort t of x′ of Δ(x, y), minus one."""
    i, j = _distinct(ch, x, x2)
    reach = ch.table[j] <= t
    if not reach.any():
        return INF
    return nat(np.min(ch.table[i][reach]) - 1)


def sigma_detect(code: AbstractCode, t: int) -> ExtendedNat:
    """Detection capability of the bounded decoder with correction radius t."""
    tau = tau_code(code)
    if tau < t:
        raise CodeNotTCorrecting(f"τ(C) = {tau} < t = {t}")
    if len(code) < 2:
        return INF
    ch = code.channel
    best = INF
    for a, b in itertools.permutations(code.codewords, 2):
        best = min(best, sigma_pair(ch, a, b, t))
    return best


# ---------------------------------------------------------------------------
# Text tables
# ---------------------------------------------------------------------------


def _parse_value(tok: str, line: int) -> float:
    if tok.lower() in ("inf", "∞"):
        return INF
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"line {line}: bad discrepancy {tok!r}") from None
    if v < 0:
        raise ParseError(f"line {line}: negative discrepancy {v}")
    return float(v)


def parse_channel_table(text: str, name: str = "") -> DiscrepancyChannel:
    """Parse ``|X| |Y|`` followed by |X| rows of |Y| values (``inf`` allowed).

    Inputs and outputs are labelled by their integer positions.
    """
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ParseError("empty channel table")
    head = lines[0][1].split()
    try:
        nx, ny = (int(t) for t in head)
    except ValueError:
        raise ParseError(f"line {lines[0][0]}: expected '|X| |Y|'") from None
    if nx < 1 or ny < 1:
        raise ParseError("alphabets must be nonempty")
    body = lines[1:]
    if len(body) != nx:
        raise ParseError(f"expected {nx} table rows, found {len(body)}")
    table = []
    for line, text_row in body:
        toks = text_row.split()
        if len(toks) != ny:
            raise ParseError(f"line {line}: expected {ny} values, found {len(toks)}")
        table.append([_parse_value(t, line) for t in toks])
    return DiscrepancyChannel(list(range(nx)), list(range(ny)), np.array(table), name)


def read_channel_table(path: str | Path) -> DiscrepancyChannel:
    return parse_channel_table(Path(path).read_text(), Path(path).stem)


def format_channel_table(ch: DiscrepancyChannel) -> str:
    rows = [f"{len(ch.inputs)} {len(ch.outputs)}"]
    for r in ch.table:
        rows.append(" ".join("inf" if v == INF else str(int(v)) for v in r))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# Reference channels
# ---------------------------------------------------------------------------


def hamming_channel(n: int, q: int = 2) -> DiscrepancyChannel:
    """Words of length n over {0..q-1}; Δ counts differing positions."""
    words = ["".join(map(str, w)) for w in itertools.product(range(q), repeat=n)]
    return DiscrepancyChannel.from_function(
        words, words, lambda x, y: sum(a != b for a, b in zip(x, y)), f"hamming{n}"
    )


ERASURE = "e"


def erasure_channel(n: int, q: int = 2) -> DiscrepancyChannel:
    """Outputs may replace symbols by ``e``; Δ counts erasures, inf on substitutions."""
    words = ["".join(map(str, w)) for w in itertools.product(range(q), repeat=n)]
    outs = ["".join(w) for w in itertools.product([str(s) for s in range(q)] + [ERASURE], repeat=n)]

    def disc(x: str, y: str) -> ExtendedNat:
        cost = 0
        for a, b in zip(x, y):
            if b == ERASURE:
                cost += 1
            elif a != b:
                return INF
        return cost

    return DiscrepancyChannel.from_function(words, outs, disc, f"erasure{n}")
