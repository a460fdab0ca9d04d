"""Rank, subspace and injection distances and the network discrepancies.

Each discrepancy has a closed-form evaluator and a brute-force oracle that
follows the definition literally (minimizing over transfer or error
matrices).  Oracles exist to check the closed forms and are only practical
at desk scale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .budget import check_budget
from .discrepancy import INF, DiscrepancyChannel, ExtendedNat
from .errors import InvalidL, InvalidParameters, ShapeMismatch
from .ffmat import (
    Field,
    Matrix,
    all_matrices,
    hstack,
    matrices_with_rank_at_least,
    mat_enumerate,
    solve,
)
from .spaces import Subspace, _check_ambient, intersection_dim, row_space, space_sum


def _same_shape(x: Matrix, y: Matrix) -> None:
    if x.shape != y.shape:
        raise ShapeMismatch(f"{x.shape} vs {y.shape}")


def _same_width(x: Matrix, y: Matrix) -> None:
    if x.cols != y.cols:
        raise ShapeMismatch(f"packets of length {x.cols} vs {y.cols}")


# ---------------------------------------------------------------------------
# Distances
# ---------------------------------------------------------------------------


def rank_distance(x: Matrix, y: Matrix) -> int:
    _same_shape(x, y)
    return (y - x).rank()


def subspace_distance(u: Subspace, v: Subspace) -> int:
    _check_ambient(u, v)
    return 2 * space_sum(u, v).dim - u.dim - v.dim


def injection_distance(u: Subspace, v: Subspace) -> int:
    _check_ambient(u, v)
    return space_sum(u, v).dim - min(u.dim, v.dim)


def _rank_inter(x: Matrix, y: Matrix) -> tuple[int, int, int]:
    """(rank X, rank Y, dim(⟨X⟩ ∩ ⟨Y⟩))."""
    _same_width(x, y)
    u, v = row_space(x), row_space(y)
    return u.dim, v.dim, intersection_dim(u, v)


# ---------------------------------------------------------------------------
# Parameter records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoherentParams:
    """Known transfer matrix A (N x n)."""

    A: Matrix

    @property
    def rho(self) -> int:
        return self.A.cols - self.A.rank()

    @property
    def n(self) -> int:
        return self.A.cols

    @property
    def N(self) -> int:
        return self.A.rows


@dataclass(frozen=True)
class YeungParams:
    """Known transfer matrix A (N x n) and edge transfer matrix F (N x |E|)."""

    A: Matrix
    F: Matrix

    def __post_init__(self) -> None:
        if self.A.rows != self.F.rows:
            raise ShapeMismatch(f"A has {self.A.rows} rows, F has {self.F.rows}")

    @property
    def edge_count(self) -> int:
        return self.F.cols


@dataclass(frozen=True)
class NoncoherentParams:
    """Rank-deficiency budget rho, output deficiency sigma, output rows N."""

    rho: int
    sigma: int = 0
    N: int | None = None

    def __post_init__(self) -> None:
        if self.rho < 0 or self.sigma < 0:
            raise InvalidParameters("deficiencies must be nonnegative")


# ---------------------------------------------------------------------------
# Coherent model
# ---------------------------------------------------------------------------


def _check_coherent(a: Matrix, x: Matrix, y: Matrix) -> None:
    if a.cols != x.rows or a.rows != y.rows or x.cols != y.cols:
        raise ShapeMismatch(f"A {a.shape}, X {x.shape}, Y {y.shape} are not conformable")


def disc_coherent(p: CoherentParams, x: Matrix, y: Matrix) -> int:
    _check_coherent(p.A, x, y)
    return (y - p.A @ x).rank()


@lru_cache(maxsize=None)
def _low_rank_products(field: Field, rows: int, cols: int, r: int) -> frozenset:
    """{D Z : D rows x r, Z r x cols} as a set of entry tuples."""
    check_budget(field.q ** (rows * r + r * cols), f"products of {rows}x{r} and {r}x{cols}")
    zs = all_matrices(field, r, cols)
    return frozenset((d @ z).entries for d in all_matrices(field, rows, r) for z in zs)


def disc_coherent_oracle(p: CoherentParams, x: Matrix, y: Matrix) -> int:
    """Smallest r such that Y = AX + DZ for some D (N x r) and Z (r x m)."""
    _check_coherent(p.A, x, y)
    target = (y - p.A @ x).entries
    for r in range(min(y.rows, y.cols) + 1):
        if target in _low_rank_products(x.field, y.rows, y.cols, r):
            return r
    raise AssertionError("unreachable: r = min(N, m) always suffices")  # pragma: no cover


def ddist_coherent(p: CoherentParams, x: Matrix, x2: Matrix) -> int:
    _same_shape(x, x2)
    return (p.A @ (x2 - x)).rank()


# ---------------------------------------------------------------------------
# Yeung model: Y = AX + FE, effort is the number of nonzero rows of E
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def min_weight_solution(f: Matrix, target: Matrix) -> tuple[ExtendedNat, Matrix | None]:
    """Row-sparsest E with F E = target, by increasing support size.

    Returns ``(weight, E)``, or ``(inf, None)`` when no E exists.
    """
    if f.rows != target.rows:
        raise ShapeMismatch(f"F {f.shape} vs target {target.shape}")
    edges, m = f.cols, target.cols
    if target.is_zero():
        return 0, Matrix.zeros(f.field, edges, m)
    for size in range(1, edges + 1):
        for support in itertools.combinations(range(edges), size):
            fs = f.take_cols(support)
            if hstack(fs, target).rank() != fs.rank():
                continue
            sol = solve(fs, target)
            ent = [0] * (edges * m)
            for r, e in enumerate(support):
                ent[e * m : (e + 1) * m] = sol.row(r)
            return size, Matrix(f.field, edges, m, tuple(ent))
    return INF, None


def yeung_weight(f: Matrix, target: Matrix) -> ExtendedNat:
    return min_weight_solution(f, target)[0]


def disc_yeung(p: YeungParams, x: Matrix, y: Matrix) -> ExtendedNat:
    _check_coherent(p.A, x, y)
    return yeung_weight(p.F, y - p.A @ x)


def ddist_yeung(p: YeungParams, x1: Matrix, x2: Matrix) -> ExtendedNat:
    _same_shape(x1, x2)
    return yeung_weight(p.F, p.A @ (x2 - x1))


def min_over_F(p: CoherentParams, x: Matrix, y: Matrix, edge_count: int) -> int:
    """min over every F (N x |E|) of the Yeung discrepancy."""
    _check_coherent(p.A, x, y)
    target = y - p.A @ x
    best = INF
    for f in mat_enumerate(x.field, p.N, edge_count):
        best = min(best, yeung_weight(f, target))
        if best == 0:
            break
    return best


# ---------------------------------------------------------------------------
# Noncoherent model
# ---------------------------------------------------------------------------


def disc_noncoherent(p: NoncoherentParams, x: Matrix, y: Matrix) -> int:
    rx, ry, w = _rank_inter(x, y)
    return max(rx - p.rho, ry) - w


@lru_cache(maxsize=None)
def _images(x: Matrix, rows: int, min_rank: int) -> frozenset:
    """{A X : A rows x n with rank A ≥ min_rank}, as entry tuples."""
    check_budget(x.field.q ** (rows * x.rows), f"transfer matrices {rows}x{x.rows}")
    return frozenset((a @ x).entries for a in matrices_with_rank_at_least(x.field, rows, x.rows, min_rank))


def _min_rank_between(field: Field, rows: int, cols: int, left: frozenset, right: frozenset) -> int:
    if not left or not right:
        raise InvalidParameters("no transfer matrix meets the rank constraint")
    sub = field.sub
    best = min(rows, cols)
    for a in left:
        for b in right:
            r = Matrix(field, rows, cols, tuple(sub[u][v] for u, v in zip(a, b))).rank()
            if r < best:
                best = r
                if r == 0:
                    return 0
    return best


def disc_noncoherent_oracle(p: NoncoherentParams, x: Matrix, y: Matrix) -> int:
    """min over A (N x n) with rank A ≥ n − ρ of rank(Y − AX)."""
    _same_width(x, y)
    lo = max(x.rows - p.rho, 0)
    return _min_rank_between(x.field, y.rows, y.cols, frozenset([y.entries]), _images(x, y.rows, lo))


def _check_L(p: NoncoherentParams, x: Matrix, y: Matrix, L: int) -> None:
    need = max(x.rows - p.rho, y.rows - p.sigma)
    if L < need:
        raise InvalidL(f"L = {L} < max(n − ρ, N − σ) = {need}")


def disc_rho_sigma(p: NoncoherentParams, x: Matrix, y: Matrix, L: int) -> int:
    _check_L(p, x, y, L)
    rx, ry, w = _rank_inter(x, y)
    return max(rx - p.rho - w, ry - p.sigma - w, 0)


def disc_rho_sigma_oracle(p: NoncoherentParams, x: Matrix, y: Matrix, L: int) -> int:
    """min over A (L x n, rank ≥ n − ρ) and B (L x N, rank ≥ N − σ) of rank(BY − AX)."""
    _same_width(x, y)
    _check_L(p, x, y, L)
    ax = _images(x, L, max(x.rows - p.rho, 0))
    by = _images(y, L, max(y.rows - p.sigma, 0))
    return _min_rank_between(x.field, L, x.cols, by, ax)


def ddist_noncoherent(p: NoncoherentParams, x: Matrix, x2: Matrix) -> int:
    rx, rx2, w = _rank_inter(x, x2)
    return max(max(rx, rx2) - w - p.rho, 0)


def ddist_noncoherent_oracle(p: NoncoherentParams, x: Matrix, x2: Matrix) -> int:
    """min over admissible A, A′ (N x n each) of rank(A′X′ − AX)."""
    _same_shape(x, x2)
    rows = p.N if p.N is not None else x.rows
    lo = max(x.rows - p.rho, 0)
    return _min_rank_between(x.field, rows, x.cols, _images(x2, rows, lo), _images(x, rows, lo))


def prop17_relation(p: NoncoherentParams, x: Matrix, y: Matrix) -> int:
    """½ d_S(⟨X⟩,⟨Y⟩) − ½ ρ + ½ |rank X − rank Y − ρ|."""
    _same_width(x, y)
    u, v = row_space(x), row_space(y)
    twice = subspace_distance(u, v) - p.rho + abs(u.dim - v.dim - p.rho)
    if twice % 2:
        raise AssertionError(f"odd numerator {twice} for X={x!r}, Y={y!r}")
    return twice // 2


# ---------------------------------------------------------------------------
# Channels over matrix alphabets
# ---------------------------------------------------------------------------


def coherent_channel(a: Matrix, m: int, inputs=None, outputs=None) -> DiscrepancyChannel:
    f = a.field
    inputs = list(all_matrices(f, a.cols, m)) if inputs is None else list(inputs)
    outputs = list(all_matrices(f, a.rows, m)) if outputs is None else list(outputs)
    p = CoherentParams(a)
    return DiscrepancyChannel.from_function(inputs, outputs, lambda x, y: disc_coherent(p, x, y), "coherent")


def yeung_channel(a: Matrix, f_mat: Matrix, m: int, inputs=None, outputs=None) -> DiscrepancyChannel:
    f = a.field
    inputs = list(all_matrices(f, a.cols, m)) if inputs is None else list(inputs)
    outputs = list(all_matrices(f, a.rows, m)) if outputs is None else list(outputs)
    p = YeungParams(a, f_mat)
    return DiscrepancyChannel.from_function(inputs, outputs, lambda x, y: disc_yeung(p, x, y), "yeung")


def noncoherent_channel(
    field: Field, rho: int, n: int, N: int, m: int, inputs=None, outputs=None
) -> DiscrepancyChannel:
    inputs = list(all_matrices(field, n, m)) if inputs is None else list(inputs)
    outputs = list(all_matrices(field, N, m)) if outputs is None else list(outputs)
    p = NoncoherentParams(rho, N=N)
    return DiscrepancyChannel.from_function(inputs, outputs, lambda x, y: disc_noncoherent(p, x, y), "noncoherent")
