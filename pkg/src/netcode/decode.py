"""Minimum-discrepancy, minimum-subspace-distance and bounded decoders."""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Sequence

from .codes import MatrixCode, SubspaceCode, lift_to_subspaces
from .discrepancy import FAILURE, INF, ExtendedNat, correction_bound
from .errors import CodeNotTCorrecting, InvalidParameters
from .ffmat import Matrix
from .netmetrics import (
    CoherentParams,
    NoncoherentParams,
    YeungParams,
    ddist_coherent,
    ddist_noncoherent,
    ddist_yeung,
    disc_coherent,
    disc_noncoherent,
    disc_yeung,
    subspace_distance,
)
from .spaces import Subspace, _check_ambient


@dataclass(frozen=True)
class DecodeOutcome:
    result: Any  # codeword index, or FAILURE
    discrepancy: ExtendedNat
    tie_count: int

    @property
    def failed(self) -> bool:
        return self.result is FAILURE

    def to_json(self) -> dict:
        return {
            "result": None if self.failed else self.result,
            "failure": self.failed,
            "discrepancy": "inf" if self.discrepancy == INF else self.discrepancy,
            "tie_count": self.tie_count,
        }


def argmin_outcome(values: Sequence[ExtendedNat]) -> DecodeOutcome:
    """Lowest-index argmin; FAILURE when every value is infinite."""
    best = min(values)
    ties = sum(1 for v in values if v == best)
    if best == INF:
        return DecodeOutcome(FAILURE, INF, 0)
    return DecodeOutcome(values.index(best), best, ties)


def decode_coherent(code: MatrixCode, p: CoherentParams, y: Matrix) -> DecodeOutcome:
    return argmin_outcome([disc_coherent(p, x, y) for x in code.codewords])


def decode_yeung(code: MatrixCode, p: YeungParams, y: Matrix) -> DecodeOutcome:
    return argmin_outcome([disc_yeung(p, x, y) for x in code.codewords])


@lru_cache(maxsize=64)
def _lift_injective(code: MatrixCode) -> bool:
    return lift_to_subspaces(code)[1]


def decode_noncoherent(code: MatrixCode, p: NoncoherentParams, y: Matrix) -> DecodeOutcome:
    if not _lift_injective(code):
        warnings.warn("two codewords share a row space; they cannot be told apart", stacklevel=2)
    return argmin_outcome([disc_noncoherent(p, x, y) for x in code.codewords])


def decode_subspace(code: SubspaceCode, u: Subspace) -> DecodeOutcome:
    for v in code.members[:1]:
        _check_ambient(v, u)
    return argmin_outcome([subspace_distance(v, u) for v in code.members])


# ---------------------------------------------------------------------------
# Bounded-discrepancy decoding
# ---------------------------------------------------------------------------

KINDS = ("coherent", "yeung", "noncoherent", "subspace")


def _kind_functions(kind: str, params: Any) -> tuple[Callable, Callable]:
    if kind == "coherent":
        return (lambda x, y: disc_coherent(params, x, y)), (lambda a, b: ddist_coherent(params, a, b))
    if kind == "yeung":
        return (lambda x, y: disc_yeung(params, x, y)), (lambda a, b: ddist_yeung(params, a, b))
    if kind == "noncoherent":
        return (lambda x, y: disc_noncoherent(params, x, y)), (lambda a, b: ddist_noncoherent(params, a, b))
    if kind == "subspace":
        return subspace_distance, subspace_distance
    raise InvalidParameters(f"unknown channel kind {kind!r}; expected one of {KINDS}")


def _members(code: MatrixCode | SubspaceCode) -> tuple:
    return code.members if isinstance(code, SubspaceCode) else code.codewords


@lru_cache(maxsize=4096)
def code_delta(code: MatrixCode | SubspaceCode, kind: str, params: Any) -> ExtendedNat:
    """Minimum Δ-distance between distinct codewords (infinite for one codeword)."""
    _, dd = _kind_functions(kind, params)
    words = _members(code)
    return min((dd(a, b) for a, b in itertools.combinations(words, 2)), default=INF)


def decode_bounded(
    code: MatrixCode | SubspaceCode, kind: str, params: Any, y: Matrix | Subspace, t: int
) -> DecodeOutcome:
    """Return the unique codeword within discrepancy t of y, else FAILURE.

    The code must correct t errors; every discrepancy used here is normal, so
    that means ⌊(δ(C) − 1)/2⌋ ≥ t.
    """
    disc, _ = _kind_functions(kind, params)
    cap = correction_bound(code_delta(code, kind, params))
    if cap < t:
        raise CodeNotTCorrecting(f"correction capability {cap} < t = {t}")
    vals = [disc(x, y) for x in _members(code)]
    inside = [i for i, v in enumerate(vals) if v <= t]
    if len(inside) != 1:
        return DecodeOutcome(FAILURE, min(vals), len(inside))
    i = inside[0]
    return DecodeOutcome(i, vals[i], 1)
