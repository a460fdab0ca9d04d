"""Worst-case adversaries and exhaustive checks of the correction theorems.

The attack constructors build, for two codewords at Δ-distance d and any
split 0 <= i <= d, a received matrix at discrepancy exactly i from the first
codeword and d - i from the second.  With i = ⌈d/2⌉ this is the forced
decoding failure behind every "only if" direction.

:func:`verify_correction_theorem` decodes every admissible adversary output
and compares the observed success pattern with the distance condition.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np

from .budget import within_budget, check_budget
from .codes import MatrixCode, SubspaceCode, lift_to_subspaces, min_injection_distance, min_rank_distance
from .decode import DecodeOutcome, argmin_outcome, decode_coherent, decode_noncoherent, decode_subspace, decode_yeung
from .discrepancy import INF, ExtendedNat
from .errors import (
    EnumerationBudgetExceeded,
    InvalidL,
    InvalidParameters,
    NoInstanceFound,
    SplitOutOfRange,
    UnreachablePair,
)
from .ffmat import (
    GF2,
    Field,
    Matrix,
    all_matrices,
    decomposition_split,
    format_matrix,
    left_kernel,
    matrices_with_rank_at_least,
    solve,
    vstack,
)
from .netmetrics import (
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
    injection_distance,
    min_weight_solution,
    subspace_distance,
)
from .spaces import Subspace, intersection_dim, row_space, space_enumerate, space_intersect, space_sum
from .tables import left_multiplier, matrix_space

FAILING_TRIALS_KEPT = 5


def _text(m: Matrix) -> str:
    return format_matrix(m)


def _jsonable(v: Any) -> Any:
    if isinstance(v, Matrix):
        return _text(v)
    if isinstance(v, Subspace):
        return _text(v.basis)
    if isinstance(v, DecodeOutcome):
        return v.to_json()
    if isinstance(v, float) and v == INF:
        return "inf"
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


# ---------------------------------------------------------------------------
# Attack constructors
# ---------------------------------------------------------------------------


@dataclass
class AttackResult:
    Y: Matrix
    witness: dict[str, Matrix]
    claimed: tuple[ExtendedNat, ExtendedNat]

    def to_json(self) -> dict:
        return {"Y": _text(self.Y), "witness": _jsonable(self.witness), "claimed": _jsonable(list(self.claimed))}


def _confirm(claimed: tuple, observed: tuple, what: str) -> None:
    if tuple(claimed) != tuple(observed):
        raise AssertionError(f"{what}: claimed discrepancies {claimed}, recomputed {observed}")


def coherent_attack(p: CoherentParams, x: Matrix, x2: Matrix, i: int) -> AttackResult:
    """Y = AX + W where W + W′ = A(X′ − X) with rank W = i."""
    d = ddist_coherent(p, x, x2)
    if not 0 <= i <= d:
        raise SplitOutOfRange(f"split {i} outside [0, {d}]")
    w, w2 = decomposition_split(p.A @ (x2 - x), i)
    y = p.A @ x + w
    claimed = (i, d - i)
    _confirm(claimed, (disc_coherent(p, x, y), disc_coherent(p, x2, y)), "coherent attack")
    return AttackResult(y, {"A": p.A, "W": w, "W2": w2}, claimed)


def yeung_attack(p: YeungParams, x1: Matrix, x2: Matrix, i: int) -> AttackResult:
    """Y = AX₁ + FE₁ where E₁ keeps i of the nonzero rows of a sparsest E."""
    d, e = min_weight_solution(p.F, p.A @ (x2 - x1))
    if d == INF:
        raise UnreachablePair("no error pattern connects the two codewords")
    if not 0 <= i <= d:
        raise SplitOutOfRange(f"split {i} outside [0, {d}]")
    m = e.cols
    support = [r for r in range(e.rows) if any(e.row(r))]
    keep = set(support[:i])
    e1 = Matrix(e.field, e.rows, m, tuple(v for r in range(e.rows) for v in (e.row(r) if r in keep else (0,) * m)))
    e2 = e - e1
    y = p.A @ x1 + p.F @ e1
    claimed = (i, d - i)
    _confirm(claimed, (disc_yeung(p, x1, y), disc_yeung(p, x2, y)), "yeung attack")
    return AttackResult(y, {"A": p.A, "F": p.F, "E": e, "E1": e1, "E2": e2}, claimed)


def _complement_rows(space_basis: Matrix, sub: Matrix) -> Matrix:
    """Rows of ``space_basis`` that extend ``sub`` to a basis of the whole space."""
    chosen = sub
    picked = []
    for r in range(space_basis.rows):
        cand = vstack(chosen, space_basis.take_rows([r]))
        if cand.rank() > chosen.rank():
            chosen = cand
            picked.append(r)
    return space_basis.take_rows(picked)


def _adapted_transform(x: Matrix, wb: Matrix) -> tuple[Matrix, Matrix]:
    """Invertible R with R X = [W; X̃; 0], and the complement X̃."""
    n = x.rows
    basis = x.row_basis()
    xt = _complement_rows(basis, wb)
    target = vstack(wb, xt)
    c_t = solve(x.T, target.T)
    if c_t is None:  # pragma: no cover - target rows lie in the row space
        raise AssertionError("adapted basis outside the row space")
    r = vstack(c_t.T, left_kernel(x)) if n else Matrix.zeros(x.field, 0, 0)
    return r, xt


def _selector(f: Field, rows: int, width: int, w: int, k: int, i: int) -> Matrix:
    """[[I_w 0 0 0], [0 Ā 0 0], [0 0 I 0]] with Ā = [I_i 0], cut to ``rows`` rows."""
    ent = [0] * (rows * width)
    head = min(rows, w + i)
    for r in range(rows):
        c = r if r < head else k + (r - w - i)
        if not 0 <= c < width:
            raise AssertionError(f"selector column {c} outside width {width}")
        ent[r * width + c] = 1
    return Matrix(f, rows, width, tuple(ent))


def rank_achiever(x: Matrix, y: Matrix, rho: int, sigma: int, L: int) -> dict[str, Matrix]:
    """Transfer matrices A = A₁A₂ and B = B₁B₂ attaining the minimum of rank(BY − AX).

    A₂ and B₂ map X and Y to [W; X̃; 0] and [W; Ỹ; 0] where W spans the
    intersection of the row spaces; A₁ and B₁ keep W, the first
    [k − w − ρ]⁺ (resp. [s − w − σ]⁺) rows of the complements, and pad.
    """
    n, N, f = x.rows, y.rows, x.field
    if L < max(n - rho, N - sigma):
        raise InvalidL(f"L = {L} < max(n − ρ, N − σ) = {max(n - rho, N - sigma)}")
    inter = space_intersect(row_space(x), row_space(y))
    wb = inter.basis
    w = inter.dim
    rx, _ = _adapted_transform(x, wb)
    ry, _ = _adapted_transform(y, wb)
    k, s = x.rank(), y.rank()
    i, j = max(k - w - rho, 0), max(s - w - sigma, 0)
    a2 = vstack(rx, Matrix.zeros(f, L + rho - n, n))
    b2 = vstack(ry, Matrix.zeros(f, L + sigma - N, N))
    a1 = _selector(f, L, L + rho, w, k, i)
    b1 = _selector(f, L, L + sigma, w, s, j)
    a, b = a1 @ a2, b1 @ b2
    if a.rank() < n - rho or b.rank() < N - sigma:
        raise AssertionError("constructed transfer matrices violate the rank constraint")
    expect = disc_rho_sigma(NoncoherentParams(rho, sigma), x, y, L)
    got = (b @ y - a @ x).rank()
    if got != expect:
        raise AssertionError(f"achiever reaches rank {got}, expected {expect}")
    return {"A": a, "B": b, "A1": a1, "A2": a2, "B1": b1, "B2": b2, "W": wb}


def noncoherent_attack(p: NoncoherentParams, x: Matrix, x2: Matrix, i: int) -> AttackResult:
    """Optimal A, A′ from :func:`rank_achiever`, then split A′X′ − AX."""
    if x.shape != x2.shape:
        raise InvalidParameters(f"{x.shape} vs {x2.shape}")
    N = p.N if p.N is not None else x.rows
    d = ddist_noncoherent(p, x, x2)
    if not 0 <= i <= d:
        raise SplitOutOfRange(f"split {i} outside [0, {d}]")
    ach = rank_achiever(x, x2, p.rho, p.rho, N)
    a, a_prime = ach["A"], ach["B"]
    diff = a_prime @ x2 - a @ x
    if diff.rank() != d:
        raise AssertionError(f"achiever gives rank {diff.rank()}, expected {d}")
    w, w2 = decomposition_split(diff, i)
    y = a @ x + w
    claimed = (i, d - i)
    _confirm(claimed, (disc_noncoherent(p, x, y), disc_noncoherent(p, x2, y)), "noncoherent attack")
    witness = {"A": a, "A_prime": a_prime, "A1": ach["A1"], "A2": ach["A2"], "B1": ach["B1"], "B2": ach["B2"], "W": w, "W2": w2}
    return AttackResult(y, witness, claimed)


# ---------------------------------------------------------------------------
# Trial reports
# ---------------------------------------------------------------------------

CONFIRMED = "CONFIRMED"
FALSIFIED = "FALSIFIED"


@dataclass
class TrialReport:
    model: str
    params: dict
    t: int
    mode: str
    trials: int = 0
    successes: int = 0
    predicted_success: bool | None = None
    observed_success: bool | None = None
    verdict: str = CONFIRMED
    predictions: dict = field(default_factory=dict)
    witness: dict | None = None
    counterexamples: list = field(default_factory=list)
    seed: int | None = None
    fallback: bool = False
    details: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return self.trials - self.successes

    def to_json(self) -> dict:
        return _jsonable(
            {
                "model": self.model,
                "params": self.params,
                "t": self.t,
                "mode": self.mode,
                "seed": self.seed,
                "fallback": self.fallback,
                "trials": self.trials,
                "successes": self.successes,
                "failures": self.failures,
                "predicted_success": self.predicted_success,
                "observed_success": self.observed_success,
                "predictions": self.predictions,
                "verdict": self.verdict,
                "witness": self.witness,
                "counterexamples": self.counterexamples,
                "details": self.details,
            }
        )


@dataclass(frozen=True)
class TransferFamily:
    """Every N x n transfer matrix whose column-rank deficiency is exactly rho."""

    rho: int
    N: int | None = None


def _strict_success(outcome: DecodeOutcome, sent: int) -> bool:
    return outcome.result == sent and outcome.tie_count == 1


def _sweep_table(dist: np.ndarray, own: int) -> np.ndarray:
    """Rows of ``dist`` (outputs x codewords) where codeword ``own`` is the unique minimum."""
    if dist.shape[1] == 1:
        return np.ones(dist.shape[0], dtype=bool)
    others = np.delete(dist, own, axis=1)
    return dist[:, own] < others.min(axis=1)


# -- coherent ---------------------------------------------------------------


def _coherent_images(code: MatrixCode, a: Matrix) -> np.ndarray:
    src = matrix_space(code.field, code.n, code.m)
    lm = left_multiplier(a, code.m)
    return lm[np.array([src.code(x) for x in code.codewords], dtype=np.int64)]


def coherent_code_delta(code: MatrixCode, a: Matrix) -> int:
    """min over distinct codewords of rank A(X′ − X), via coded tables."""
    if len(code) < 2:
        return INF
    out = matrix_space(code.field, a.rows, code.m)
    imgs = _coherent_images(code, a)
    d = out.ranks[out.sub(imgs[:, None], imgs[None, :])]
    np.fill_diagonal(d, np.iinfo(np.int64).max)
    return int(d.min())


def _coherent_exhaustive(code: MatrixCode, a: Matrix, t: int) -> tuple[int, int, list]:
    out = matrix_space(code.field, a.rows, code.m)
    imgs = _coherent_images(code, a)
    errs = out.codes_with_rank_at_most(t)
    trials = successes = 0
    failing = []
    for c in range(len(code)):
        ys = out.add(np.full(errs.shape, imgs[c]), errs)
        dist = out.ranks[out.sub(ys[:, None], imgs[None, :])]
        ok = _sweep_table(dist, c)
        trials += ok.size
        successes += int(ok.sum())
        if len(failing) < FAILING_TRIALS_KEPT:
            for e in errs[~ok][: FAILING_TRIALS_KEPT - len(failing)]:
                failing.append({"codeword": c, "A": a, "E": out.matrix(int(e))})
    return trials, successes, failing


def _coherent_witness(code: MatrixCode, p: CoherentParams, t: int) -> dict:
    best = None
    for ia, ib in itertools.combinations(range(len(code)), 2):
        d = ddist_coherent(p, code.codewords[ia], code.codewords[ib])
        if best is None or d < best[0]:
            best = (d, ia, ib)
    d, ia, ib = best
    i = math.ceil(d / 2)
    atk = coherent_attack(p, code.codewords[ia], code.codewords[ib], i)
    out = decode_coherent(code, p, atk.Y)
    return {
        "sent": ia, "rival": ib, "delta": d, "split": i, "effort": atk.claimed[0],
        "Y": atk.Y, "attack": atk.witness, "outcome": out, "decoder_failed": not _strict_success(out, ia),
    }


# -- yeung ------------------------------------------------------------------


def _weight_limited_errors(f: Field, rows: int, cols: int, t: int):
    nonzero = [v for v in itertools.product(range(f.q), repeat=cols) if any(v)]
    for size in range(min(t, rows) + 1):
        for support in itertools.combinations(range(rows), size):
            for vals in itertools.product(nonzero, repeat=size):
                ent = [0] * (rows * cols)
                for r, v in zip(support, vals):
                    ent[r * cols : (r + 1) * cols] = v
                yield Matrix(f, rows, cols, tuple(ent))


def _yeung_exhaustive(code: MatrixCode, p: YeungParams, t: int) -> tuple[int, int, list]:
    trials = successes = 0
    failing = []
    for c, x in enumerate(code.codewords):
        seen = set()
        for e in _weight_limited_errors(code.field, p.edge_count, code.m, t):
            y = p.A @ x + p.F @ e
            if y in seen:
                continue
            seen.add(y)
            trials += 1
            if _strict_success(decode_yeung(code, p, y), c):
                successes += 1
            elif len(failing) < FAILING_TRIALS_KEPT:
                failing.append({"codeword": c, "E": e, "Y": y})
    return trials, successes, failing


def _yeung_witness(code: MatrixCode, p: YeungParams, t: int) -> dict:
    best = None
    for ia, ib in itertools.combinations(range(len(code)), 2):
        d = ddist_yeung(p, code.codewords[ia], code.codewords[ib])
        if best is None or d < best[0]:
            best = (d, ia, ib)
    d, ia, ib = best
    i = math.ceil(d / 2)
    atk = yeung_attack(p, code.codewords[ia], code.codewords[ib], i)
    out = decode_yeung(code, p, atk.Y)
    return {
        "sent": ia, "rival": ib, "delta": d, "split": i, "effort": atk.claimed[0],
        "Y": atk.Y, "attack": atk.witness, "outcome": out, "decoder_failed": not _strict_success(out, ia),
    }


# -- noncoherent ------------------------------------------------------------


def _noncoherent_literal(code: MatrixCode, p: NoncoherentParams, t: int) -> tuple[int, int, list, int]:
    """Every (A, E) with rank A ≥ n − ρ and rank E ≤ t, decoded on Y = AX + E."""
    f, n, m = code.field, code.n, code.m
    N = p.N if p.N is not None else n
    out = matrix_space(f, N, m)
    src = matrix_space(f, n, m)
    xcodes = np.array([src.code(x) for x in code.codewords], dtype=np.int64)
    errs = out.codes_with_rank_at_most(t)
    transfers = matrices_with_rank_at_least(f, N, n, max(n - p.rho, 0))
    if not transfers:
        raise InvalidParameters(f"no {N}x{n} transfer matrix has rank ≥ {n - p.rho}")
    combos = 0
    reach: list[set[int]] = [set() for _ in code.codewords]
    for a in transfers:
        imgs = left_multiplier(a, m)[xcodes]
        for c in range(len(code)):
            reach[c].update(out.add(np.full(errs.shape, imgs[c]), errs).tolist())
            combos += errs.size
    cache: dict[int, list[int]] = {}
    trials = successes = 0
    failing = []
    for c in range(len(code)):
        for y in sorted(reach[c]):
            if y not in cache:
                ym = out.matrix(y)
                cache[y] = [disc_noncoherent(p, x, ym) for x in code.codewords]
            vals = cache[y]
            trials += 1
            best = min(vals)
            if vals[c] == best and vals.count(best) == 1:
                successes += 1
            elif len(failing) < FAILING_TRIALS_KEPT:
                failing.append({"codeword": c, "Y": out.matrix(y)})
    return trials, successes, failing, combos


@lru_cache(maxsize=32)
def _received_profile(code: MatrixCode, N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[Subspace, ...]]:
    """Codeword ranks, received dimensions and intersection table over every row space of dim <= N."""
    f, m = code.field, code.m
    spaces = [row_space(x) for x in code.codewords]
    ranks = np.array([s.dim for s in spaces])
    received = tuple(space_enumerate(f, m, range(min(N, m) + 1)))
    dims = np.array([u.dim for u in received])
    inter = np.array([[intersection_dim(s, u) for s in spaces] for u in received]).reshape(len(received), len(spaces))
    return ranks, dims, inter, received


def _noncoherent_classes(code: MatrixCode, p: NoncoherentParams, t: int) -> tuple[int, int, list]:
    """Every received row space reachable with at most t injections.

    Decoding depends on Y only through its row space, and a row space of
    dimension at most N is reachable from X with effort t exactly when the
    noncoherent discrepancy is at most t.
    """
    N = p.N if p.N is not None else code.n
    ranks, dims, inter, received = _received_profile(code, N)
    disc = np.maximum(ranks[None, :] - p.rho, dims[:, None]) - inter
    trials = successes = 0
    failing = []
    for c in range(len(code)):
        rows = np.flatnonzero(disc[:, c] <= t)
        ok = _sweep_table(disc[rows], c)
        trials += rows.size
        successes += int(ok.sum())
        for r in rows[~ok][: max(FAILING_TRIALS_KEPT - len(failing), 0)]:
            failing.append({"codeword": c, "received_space": received[r]})
    return trials, successes, failing


def _noncoherent_witness(code: MatrixCode, p: NoncoherentParams, t: int) -> dict:
    best = None
    for ia, ib in itertools.combinations(range(len(code)), 2):
        d = ddist_noncoherent(p, code.codewords[ia], code.codewords[ib])
        if best is None or d < best[0]:
            best = (d, ia, ib)
    d, ia, ib = best
    i = math.ceil(d / 2)
    atk = noncoherent_attack(p, code.codewords[ia], code.codewords[ib], i)
    out = argmin_outcome([disc_noncoherent(p, x, atk.Y) for x in code.codewords])
    return {
        "sent": ia, "rival": ib, "delta": d, "split": i, "effort": atk.claimed[0],
        "Y": atk.Y, "attack": atk.witness, "outcome": out, "decoder_failed": not _strict_success(out, ia),
    }


# -- randomized sampling ----------------------------------------------------


def _random_matrix(rng: random.Random, f: Field, rows: int, cols: int) -> Matrix:
    return Matrix(f, rows, cols, tuple(rng.randrange(f.q) for _ in range(rows * cols)))


def _random_low_rank(rng: random.Random, f: Field, rows: int, cols: int, t: int) -> Matrix:
    r = rng.randint(0, min(t, rows, cols))
    return _random_matrix(rng, f, rows, r) @ _random_matrix(rng, f, r, cols)


def _random_rank_at_least(rng: random.Random, f: Field, rows: int, cols: int, r: int) -> Matrix:
    while True:
        a = _random_matrix(rng, f, rows, cols)
        if a.rank() >= r:
            return a


def _randomized(model: str, code: MatrixCode, params: Any, t: int, trials: int, seed: int) -> tuple[int, int, list]:
    rng = random.Random(seed)
    f = code.field
    successes = 0
    failing = []
    for _ in range(trials):
        c = rng.randrange(len(code))
        x = code.codewords[c]
        if model == "coherent":
            a = params.A
            e = _random_low_rank(rng, f, a.rows, code.m, t)
            out = decode_coherent(code, params, a @ x + e)
            record = {"codeword": c, "A": a, "E": e}
        elif model == "yeung":
            rows = rng.sample(range(params.edge_count), min(t, params.edge_count))
            e = _random_matrix(rng, f, params.edge_count, code.m)
            e = Matrix(f, e.rows, e.cols, tuple(v if (i // code.m) in rows else 0 for i, v in enumerate(e.entries)))
            out = decode_yeung(code, params, params.A @ x + params.F @ e)
            record = {"codeword": c, "E": e}
        else:
            N = params.N if params.N is not None else code.n
            a = _random_rank_at_least(rng, f, N, code.n, max(code.n - params.rho, 0))
            e = _random_low_rank(rng, f, N, code.m, t)
            out = argmin_outcome([disc_noncoherent(params, w, a @ x + e) for w in code.codewords])
            record = {"codeword": c, "A": a, "E": e}
        if _strict_success(out, c):
            successes += 1
        elif len(failing) < FAILING_TRIALS_KEPT:
            failing.append(record)
    return trials, successes, failing


# -- driver -----------------------------------------------------------------


def _finish(report: TrialReport, failing: list) -> TrialReport:
    report.observed_success = report.failures == 0
    report.counterexamples = failing
    predicted = report.predicted_success
    if predicted:
        if report.failures:
            report.verdict = FALSIFIED
    else:
        w = report.witness
        if w is None or not w.get("decoder_failed") or w.get("effort", INF) > report.t:
            report.verdict = FALSIFIED
            report.counterexamples = [{"reason": "converse without a failing witness", "witness": w}]
        elif report.mode == "exhaustive" and report.failures == 0:
            report.verdict = FALSIFIED
    return report


def verify_correction_theorem(
    model: str,
    code: MatrixCode,
    params: Any,
    t: int,
    mode: str = "auto",
    trials: int = 2000,
    seed: int = 0,
) -> TrialReport:
    """Decode every admissible adversary output and compare with the distance condition.

    ``model`` is ``coherent`` (params :class:`CoherentParams`, or
    :class:`TransferFamily` for every A of a given deficiency), ``yeung``
    (params :class:`YeungParams`) or ``noncoherent`` (params
    :class:`NoncoherentParams`).  Success means the transmitted codeword is
    the unique minimizer.  When the condition fails, an attack witness with
    effort at most t must make the decoder fail.
    """
    if mode not in ("auto", "exhaustive", "randomized"):
        raise InvalidParameters(f"unknown mode {mode!r}")
    if model == "coherent" and isinstance(params, TransferFamily):
        return _verify_family(code, params, t, mode, trials, seed)
    if model == "coherent":
        return _verify_coherent(code, params, t, mode, trials, seed)
    if model == "yeung":
        return _verify_yeung(code, params, t, mode, trials, seed)
    if model == "noncoherent":
        return _verify_noncoherent(code, params, t, mode, trials, seed)
    raise InvalidParameters(f"unknown model {model!r}")


def _choose_mode(mode: str, cost: int) -> tuple[str, bool]:
    if mode == "randomized":
        return "randomized", False
    if within_budget(cost):
        return "exhaustive", False
    if mode == "exhaustive":
        check_budget(cost, "adversary space")
    return "randomized", True


def _verify_coherent(code, p: CoherentParams, t, mode, trials, seed) -> TrialReport:
    delta = coherent_code_delta(code, p.A)
    predicted = delta > 2 * t
    out_space = matrix_space(code.field, p.A.rows, code.m)
    cost = len(code) * int((out_space.ranks <= t).sum()) * len(code)
    run_mode, fell_back = _choose_mode(mode, cost)
    report = TrialReport("coherent", {"A": p.A, "rho": p.rho}, t, run_mode, predicted_success=predicted,
                         predictions={"delta_A": delta, "condition": f"{delta} > {2 * t}"}, fallback=fell_back)
    if run_mode == "exhaustive":
        report.trials, report.successes, failing = _coherent_exhaustive(code, p.A, t)
    else:
        report.seed = seed
        report.trials, report.successes, failing = _randomized("coherent", code, p, t, trials, seed)
    if not predicted:
        report.witness = _coherent_witness(code, p, t)
    return _finish(report, failing)


def _verify_family(code, fam: TransferFamily, t, mode, trials, seed) -> TrialReport:
    """Check every A whose column-rank deficiency is exactly rho."""
    n = code.n
    N = fam.N if fam.N is not None else n
    rank = n - fam.rho
    transfers = [a for a in all_matrices(code.field, N, n) if a.rank() == rank]
    if not transfers:
        raise InvalidParameters(f"no {N}x{n} matrix has rank {rank}")
    d_r = min_rank_distance(code) if len(code) > 1 else INF
    predicted = d_r > 2 * t + fam.rho
    report = TrialReport("coherent", {"rho": fam.rho, "N": N, "transfer_matrices": len(transfers)}, t, "exhaustive",
                         predicted_success=predicted,
                         predictions={"d_R": d_r, "condition": f"{d_r} > {2 * t + fam.rho}"})
    failing: list = []
    mismatched = []
    witness = None
    for a in transfers:
        sub = _verify_coherent(code, CoherentParams(a), t, mode, trials, seed)
        report.trials += sub.trials
        report.successes += sub.successes
        report.fallback |= sub.fallback
        if sub.mode != "exhaustive":
            report.mode = sub.mode
            report.seed = seed
        if sub.verdict != CONFIRMED:
            mismatched.append(sub.to_json())
        if len(failing) < FAILING_TRIALS_KEPT:
            failing.extend(sub.counterexamples[: FAILING_TRIALS_KEPT - len(failing)])
        if witness is None and sub.witness is not None and sub.witness.get("decoder_failed"):
            witness = sub.witness
    report.witness = witness
    report.details["per_transfer_mismatches"] = len(mismatched)
    _finish(report, failing)
    if mismatched:
        report.verdict = FALSIFIED
        report.counterexamples = mismatched[:FAILING_TRIALS_KEPT]
    return report


def _verify_yeung(code, p: YeungParams, t, mode, trials, seed) -> TrialReport:
    delta = min((ddist_yeung(p, a, b) for a, b in itertools.combinations(code.codewords, 2)), default=INF)
    predicted = delta > 2 * t
    nonzero = code.field.q**code.m - 1
    cost = len(code) * len(code) * sum(math.comb(p.edge_count, s) * nonzero**s for s in range(min(t, p.edge_count) + 1))
    run_mode, fell_back = _choose_mode(mode, cost)
    report = TrialReport("yeung", {"A": p.A, "F": p.F}, t, run_mode, predicted_success=predicted,
                         predictions={"delta_AF": delta, "condition": f"{delta} > {2 * t}"}, fallback=fell_back)
    if run_mode == "exhaustive":
        report.trials, report.successes, failing = _yeung_exhaustive(code, p, t)
    else:
        report.seed = seed
        report.trials, report.successes, failing = _randomized("yeung", code, p, t, trials, seed)
    if not predicted:
        report.witness = _yeung_witness(code, p, t)
    return _finish(report, failing)


LITERAL_LIMIT = 1 << 18
LITERAL_SPACE = 1 << 12


def _verify_noncoherent(code, p: NoncoherentParams, t, mode, trials, seed) -> TrialReport:
    f, n, m = code.field, code.n, code.m
    N = p.N if p.N is not None else n
    p = NoncoherentParams(p.rho, p.sigma, N)
    delta = min((ddist_noncoherent(p, a, b) for a, b in itertools.combinations(code.codewords, 2)), default=INF)
    lifted, injective = lift_to_subspaces(code)
    d_i = min_injection_distance(lifted) if len(lifted) > 1 else INF
    predictions = {"delta_rho": delta, "condition": f"{delta} > {2 * t}", "lift_injective": injective}
    predicted = delta > 2 * t
    if injective:
        predictions["d_I"] = d_i
        predictions["subspace_condition"] = f"{d_i} > {2 * t + p.rho}"
        if (d_i > 2 * t + p.rho) != predicted:
            raise AssertionError("distance conditions disagree on an injective lift")
    literal_cost = None
    if f.q ** (N * m) <= LITERAL_SPACE and f.q ** (n * m) <= LITERAL_SPACE:
        n_transfers = len(matrices_with_rank_at_least(f, N, n, max(n - p.rho, 0)))
        literal_cost = n_transfers * f.q ** (n * m)
    report = TrialReport("noncoherent", {"rho": p.rho, "N": N}, t, "exhaustive", predicted_success=predicted,
                         predictions=predictions)
    if mode != "randomized" and literal_cost is not None and literal_cost <= LITERAL_LIMIT:
        # the multiplier tables for every transfer matrix are the dominant cost
        report.trials, report.successes, failing, combos = _noncoherent_literal(code, p, t)
        report.details = {"adversary_space": "transfer and error matrices", "combinations": combos}
    else:
        from .spaces import space_count

        cost = space_count(m, f.q, range(min(N, m) + 1)) * len(code)
        run_mode, fell_back = _choose_mode(mode, cost)
        report.mode, report.fallback = run_mode, fell_back
        if run_mode == "exhaustive":
            report.trials, report.successes, failing = _noncoherent_classes(code, p, t)
            report.details = {"adversary_space": "received row spaces"}
        else:
            report.seed = seed
            report.trials, report.successes, failing = _randomized("noncoherent", code, p, t, trials, seed)
    if not predicted:
        report.witness = _noncoherent_witness(code, p, t)
    return _finish(report, failing)


# ---------------------------------------------------------------------------
# Three-codeword subspace code favouring the injection decoder
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThreeCodewordInstance:
    d: int
    gamma: int
    gamma2: int
    dims: tuple[int, int, int]
    ambient: int
    spaces: tuple[Subspace, Subspace, Subspace]

    @property
    def eps(self) -> Fraction:
        return Fraction(self.d - self.gamma, 2)

    @property
    def eps2(self) -> Fraction:
        return Fraction(self.d - self.gamma2, 2)


def _unit(m: int, *idx: int) -> list[int]:
    return [1 if i in idx else 0 for i in range(m)]


def _template(a: int, g2: int, g3: int, w12: int, w13: int, w23: int, m: int) -> tuple[Subspace, Subspace, Subspace] | None:
    """V₂ and V₃ as coordinate blocks overlapping in w23 coordinates; V₁ mixes them."""
    b2, b3 = a + g2, a + g3
    if b2 + b3 - w23 > m:
        return None
    v2_idx = list(range(b2))
    v3_idx = list(range(b2 - w23, b2 - w23 + b3))
    only2 = [i for i in v2_idx if i not in v3_idx]
    only3 = [i for i in v3_idx if i not in v2_idx]
    mixed = a - w12 - w13
    if mixed < 0 or w12 + mixed > len(only2) or w13 + mixed > len(only3):
        return None
    vecs = [_unit(m, only2[r]) for r in range(w12)]
    vecs += [_unit(m, only3[r]) for r in range(w13)]
    vecs += [_unit(m, only2[w12 + r], only3[w13 + r]) for r in range(mixed)]
    v1 = Subspace.span(GF2, vecs, m) if vecs else Subspace.zero(GF2, m)
    v2 = Subspace.span(GF2, [_unit(m, i) for i in v2_idx], m)
    v3 = Subspace.span(GF2, [_unit(m, i) for i in v3_idx], m)
    return v1, v2, v3


def _instance_ok(inst: ThreeCodewordInstance) -> bool:
    v1, v2, v3 = inst.spaces
    d = inst.d
    return (
        subspace_distance(v1, v2) == d
        and subspace_distance(v1, v3) == d
        and 3 * inst.gamma > d and 2 * inst.gamma < d
        and 3 * inst.gamma2 > d and 2 * inst.gamma2 < d
        and v2.dim - v1.dim == inst.gamma
        and v3.dim - v1.dim == inst.gamma2
        and 2 * subspace_distance(v2, v3) > 3 * d
    )


def find_three_codeword_instance(max_ambient: int = 12, max_d: int = 16) -> ThreeCodewordInstance:
    """Smallest-ambient instance meeting the three-codeword constraints.

    Searches over d, γ, γ′ with d/3 < γ, γ′ < d/2, base dimension a and
    pairwise intersection sizes, building nested coordinate templates and
    keeping the first whose computed distances satisfy every constraint,
    including d_S(V₂, V₃) > 3d/2.
    """
    for m in range(1, max_ambient + 1):
        for d in range(1, max_d + 1):
            gammas = [g for g in range(1, d) if 3 * g > d and 2 * g < d]
            for g2, g3 in itertools.product(gammas, repeat=2):
                if g3 < g2:
                    continue
                for a in range(0, m + 1):
                    w12x2, w13x2 = 2 * a + g2 - d, 2 * a + g3 - d
                    if w12x2 < 0 or w13x2 < 0 or w12x2 % 2 or w13x2 % 2:
                        continue
                    w12, w13 = w12x2 // 2, w13x2 // 2
                    for w23 in range(0, min(a + g2, a + g3) + 1):
                        if 2 * ((a + g2) + (a + g3) - 2 * w23) <= 3 * d:
                            continue
                        spaces = _template(a, g2, g3, w12, w13, w23, m)
                        if spaces is None:
                            continue
                        inst = ThreeCodewordInstance(d, g2, g3, (a, a + g2, a + g3), m, spaces)
                        if _instance_ok(inst):
                            return inst
    raise NoInstanceFound(f"no instance with ambient dimension <= {max_ambient}")


def nested_received_space(v1: Subspace, v2: Subspace) -> Subspace:
    """U with V₁ ⊆ U ⊆ V₁ + V₂ and dim U = dim V₂."""
    u = v1
    for r in range(v2.basis.rows):
        if u.dim == v2.dim:
            break
        cand = space_sum(u, row_space(v2.basis.take_rows([r])))
        if cand.dim > u.dim:
            u = cand
    if u.dim != v2.dim:
        raise NoInstanceFound("cannot grow V₁ inside V₁ + V₂ to the dimension of V₂")
    return u


def _profile_success(spaces, c, hist, radius, metric) -> tuple[dict[int, bool], int, int]:
    """For t ≤ radius: whether every profile within injection distance t of V_c decodes to c.

    Also returns the number of scanned subspaces and how many of them decode to c.
    """
    dims = [s.dim for s in spaces]
    others = [k for k in range(len(spaces)) if k != c]
    ok = {t: True for t in range(radius + 1)}
    visited = correct = 0
    for u, j, j1, j2 in zip(*np.nonzero(hist)):
        j_all = [0] * len(spaces)
        j_all[c] = j
        j_all[others[0]] = j1
        if len(others) > 1:
            j_all[others[1]] = j2
        visited += int(hist[u, j, j1, j2])
        t_needed = max(dims[c], u) - j
        if metric == "subspace":
            vals = [dims[k] + u - 2 * j_all[k] for k in range(len(spaces))]
        else:
            vals = [max(dims[k], u) - j_all[k] for k in range(len(spaces))]
        best = min(vals)
        if vals[c] == best and vals.count(best) == 1:
            correct += int(hist[u, j, j1, j2])
        else:
            for t in range(t_needed, radius + 1):
                ok[t] = False
    return ok, visited, correct


def example4_scenario(radius: int = 2) -> TrialReport:
    """Measure the capabilities of both decoders on a searched three-codeword code.

    Balls of injection radius ``radius`` around every codeword are scanned
    exhaustively.  The noncoherent model uses ρ = 0 and enough received
    packets that any subspace of the ambient space can be observed.
    """
    from .ballscan import scan_ball

    inst = find_three_codeword_instance()
    v1, v2, v3 = inst.spaces
    spaces = list(inst.spaces)
    code = SubspaceCode.of(spaces)
    m = inst.ambient
    ok_s = {t: True for t in range(radius + 1)}
    ok_m = {t: True for t in range(radius + 1)}
    total = correct_s = correct_m = 0
    for c, center in enumerate(spaces):
        hist, count = scan_ball(center, [s for k, s in enumerate(spaces) if k != c], radius)
        total += count
        s_ok, visited, got_s = _profile_success(spaces, c, hist, radius, "subspace")
        m_ok, _, got_m = _profile_success(spaces, c, hist, radius, "injection")
        correct_s += got_s
        correct_m += got_m
        if visited != count:
            raise AssertionError("histogram does not account for every scanned subspace")
        for t in ok_s:
            ok_s[t] &= s_ok[t]
            ok_m[t] &= m_ok[t]

    def capability(ok: dict[int, bool]) -> int | None:
        """Largest t with success for all t' <= t, or None if every scanned radius succeeds."""
        for t in range(radius + 1):
            if not ok[t]:
                return t - 1
        return None

    t_s, t_m = capability(ok_s), capability(ok_m)
    details: dict[str, Any] = {
        "d": inst.d, "gamma": inst.gamma, "gamma_prime": inst.gamma2,
        "eps": str(inst.eps), "eps_prime": str(inst.eps2), "dims": list(inst.dims), "ambient": m,
        "d_S(V2,V3)": subspace_distance(v2, v3), "d_I(code)": min_injection_distance(code),
        "codewords": [s.basis for s in spaces], "scanned_subspaces": total, "radius": radius,
        "subspace_decoder_successes": correct_s, "injection_decoder_successes": correct_m,
    }

    # Subspace decoder: the received space of the two-codeword comparison.
    u = nested_received_space(v1, v2)
    out_s = decode_subspace(code, u)
    details["subspace_witness"] = {
        "sent": 1, "U": u, "injections": injection_distance(v2, u), "outcome": out_s,
        "decoder_failed": not _strict_success(out_s, 1),
        "d_S": [subspace_distance(s, u) for s in spaces], "d_I": [injection_distance(s, u) for s in spaces],
    }
    if t_s is None:
        raise NoInstanceFound(f"subspace decoder corrects every radius up to {radius}")

    # Injection decoder: for t_m = radius, the attack one step further out.
    if t_m is None:
        hi = radius + 1
        p = NoncoherentParams(0, N=m)
        best = None
        for ia, ib in itertools.permutations(range(3), 2):
            dd = injection_distance(spaces[ia], spaces[ib])
            if best is None or dd < best[0]:
                best = (dd, ia, ib)
        dd, ia, ib = best
        xa = vstack(spaces[ia].basis, Matrix.zeros(GF2, m - spaces[ia].dim, m))
        xb = vstack(spaces[ib].basis, Matrix.zeros(GF2, m - spaces[ib].dim, m))
        split = math.ceil(dd / 2)
        atk = noncoherent_attack(p, xa, xb, split)
        got = row_space(atk.Y)
        out_m = argmin_outcome([injection_distance(s, got) for s in spaces])
        details["injection_witness"] = {
            "sent": ia, "rival": ib, "injections": atk.claimed[0], "outcome": out_m, "Y": atk.Y,
            "decoder_failed": not _strict_success(out_m, ia),
        }
        if atk.claimed[0] != hi or _strict_success(out_m, ia):
            raise AssertionError("attack one step beyond the scanned radius did not force a failure")
        t_m = radius
    details["t_S"] = t_s
    details["t_M"] = t_m
    details["ratio"] = str(Fraction(t_m, t_s)) if t_s > 0 else "inf"
    report = TrialReport("example4", {"rho": 0, "N": m}, radius, "exhaustive",
                         trials=total, successes=correct_m, predicted_success=True, observed_success=True,
                         details=details)
    report.predictions = {"condition": "t_M >= t_S + 1", "gamma_window": f"{inst.d}/3 < {inst.gamma} < {inst.d}/2",
                          "eps_below_gamma": inst.eps < inst.gamma}
    report.verdict = CONFIRMED if t_m >= t_s + 1 and inst.eps < inst.gamma else FALSIFIED
    return report
